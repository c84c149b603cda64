use num_complex::Complex64;

use zetaperiod::{
    analyze, corpus, find_roots, rv_transform, zeta_via_rv, NewformData, RealPoly, Sign, DEFAULT_PRECISION,
};
use zetaperiod::hilbert::{build_h_polys, ehrhart_count};
use zetaperiod::lvalues::scaled_target_err;
use zetaperiod::poly::DEFAULT_ROOT_TOL;

#[test]
fn delta_zeros_on_critical_line() {
    let a = analyze(&NewformData::delta(200), None).unwrap();
    assert!(a.passed());
    let roots = a.zeta_roots().unwrap();
    assert_eq!(roots.roots.len(), 10);
    for r in &roots.roots {
        assert!((r.re - 0.5).abs() < 1e-8, "{r}");
    }
    let mut heights: Vec<f64> = roots.roots.iter().filter(|r| r.im > 0.0).map(|r| r.im).collect();
    heights.sort_by(f64::total_cmp);
    assert!((heights[0] - 0.349).abs() < 5e-3 && (heights[4] - 8.447).abs() < 5e-3);
}

#[test]
fn precision_changes_only_noise() {
    let d = NewformData::delta(200);
    let loose = analyze(&d, Some(scaled_target_err(1, 12, 1e-8))).unwrap();
    let tight = analyze(&d, Some(scaled_target_err(1, 12, DEFAULT_PRECISION))).unwrap();
    let (a, b) = (loose.direct.poly.coeffs(), tight.direct.poly.coeffs());
    let scale = b.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() < 1e-6 * scale);
    }
}

#[test]
fn routes_agree_across_corpus() {
    for data in corpus::all() {
        let a = analyze(&data, None).unwrap();
        let (d, r) = (a.direct.poly.coeffs(), a.rv.poly.coeffs());
        assert_eq!(d.len(), r.len(), "{}", a.label);
        let scale = d.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        for (x, y) in d.iter().zip(r) {
            assert!((x - y).abs() <= 1e-9 * scale, "{}", a.label);
        }
    }
}

#[test]
fn family_sign_matches_detection() {
    for data in corpus::all() {
        let declared = data.sign.unwrap();
        let mut blind = data.clone();
        blind.sign = None;
        assert_eq!(analyze(&blind, None).unwrap().sign, declared, "{}", data.label);
    }
}

#[test]
fn hk_minus_is_rv_transform_of_binomial_shape() {
    // z^w - 1 over (1 - z) is the geometric sum behind H_k^-
    let k = 8u32;
    let w = k as usize - 2;
    let mut c = vec![0.0; w + 1];
    c[0] = -1.0;
    c[w] = 1.0;
    let rf = RealPoly::new(c);
    let z = zeta_via_rv(&rf, k, Sign::Minus, "binomial").unwrap();
    let shape = build_h_polys(k).unwrap().zeta_shape(Sign::Minus);
    let expect = find_roots(&shape, DEFAULT_ROOT_TOL).unwrap().roots;
    let got = find_roots(&z.poly, DEFAULT_ROOT_TOL).unwrap().roots;
    assert_eq!(expect.len(), got.len());
    for e in &expect {
        assert!(got.iter().any(|g: &Complex64| (g - e).norm() < 1e-8), "{e}");
    }
}

#[test]
fn rv_of_constant_is_constant() {
    let p = rv_transform(&RealPoly::new(vec![3.0])).unwrap();
    assert_eq!(p.coeffs(), &[3.0]);
}

#[test]
fn ehrhart_matches_h_minus_values() {
    let h = build_h_polys(6).unwrap().h_minus;
    for m in 0..=5u32 {
        let v = h.eval(&num_rational::BigRational::from_integer(m.into()));
        assert_eq!(v, num_rational::BigRational::from_integer(ehrhart_count(6, m).unwrap().into()), "m={m}");
    }
}
