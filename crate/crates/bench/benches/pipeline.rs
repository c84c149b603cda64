use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use zetaperiod::combinatorics::StirlingTable;
use zetaperiod::lvalues::default_target_err;
use zetaperiod::newform::delta_coefficients;
use zetaperiod::poly::DEFAULT_ROOT_TOL;
use zetaperiod::zeta::exact_weighted_moments;
use zetaperiod::{
    all_critical_values, analyze, corpus, ehrhart_count, find_roots, period_polynomial, rv_transform, solve_hk_zeros,
    zeta_direct, NewformData, Sign,
};

fn lvalues(c: &mut Criterion) {
    c.bench_function("delta_coefficients_200", |b| b.iter(|| delta_coefficients(black_box(200))));
    let mut g = c.benchmark_group("all_critical_values");
    for label in ["5.4.a.a", "3.6.a.a", "6.10.a.a", "503.4.a.a"] {
        let data = corpus::by_label(label).unwrap();
        let target = default_target_err(&data);
        g.bench_with_input(BenchmarkId::from_parameter(label), &data, |b, d| {
            b.iter(|| all_critical_values(d, target).unwrap())
        });
    }
    g.finish();
}

fn assembly(c: &mut Criterion) {
    let data = NewformData::delta(200);
    let lv = all_critical_values(&data, default_target_err(&data)).unwrap();
    let moments = exact_weighted_moments(&lv, 12).unwrap();
    let stirling = StirlingTable::new(10);
    let rf = period_polynomial(&lv, 12).unwrap();
    c.bench_function("zeta_direct_delta", |b| {
        b.iter(|| zeta_direct(black_box(&moments), 12, Sign::Plus, &stirling, "delta").unwrap())
    });
    c.bench_function("rv_transform_delta", |b| b.iter(|| rv_transform(black_box(&rf)).unwrap()));
    c.bench_function("find_roots_period_delta", |b| b.iter(|| find_roots(black_box(&rf), DEFAULT_ROOT_TOL).unwrap()));
    c.bench_function("analyze_delta", |b| b.iter(|| analyze(black_box(&data), None).unwrap()));
}

fn hilbert(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_hk_zeros");
    for k in [12u32, 40, 100] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| b.iter(|| solve_hk_zeros(k, Sign::Minus).unwrap()));
    }
    g.finish();
    let mut g = c.benchmark_group("ehrhart_count");
    g.sample_size(10);
    for (k, m) in [(6u32, 5u32), (8, 5), (10, 4)] {
        g.bench_with_input(BenchmarkId::new(format!("k{k}"), m), &(k, m), |b, &(k, m)| {
            b.iter(|| ehrhart_count(k, m).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, lvalues, assembly, hilbert);
criterion_main!(benches);
