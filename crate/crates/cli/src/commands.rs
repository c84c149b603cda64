use num_bigint::BigInt;
use num_rational::BigRational;

use zetaperiod::analysis::{analyze, Analysis};
use zetaperiod::hilbert::{build_h_polys, convergence_study, ehrhart_count, root_distance, solve_hk_zeros};
use zetaperiod::lvalues::scaled_target_err;
use zetaperiod::poly::{find_roots, rational_string, DEFAULT_ROOT_TOL};
use zetaperiod::{corpus, selftest, NewformData, Sign};

use crate::input::{check_precision, classify, load_file, load_source, parse_sign};
use crate::output::Sink;
use crate::svg::{scatter, Guide};
use crate::{Command, CommonArgs, Emit, FamilyArgs, SourceArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Solver agreement required by `hk`.
const HK_AGREEMENT: f64 = 1e-9;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Verification(String),
}

pub fn run(cmd: &Command) -> u8 {
    let result = match cmd {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Roots(a) => cmd_roots(a),
        Command::Hk(c) => cmd_hk(c),
        Command::Ehrhart(c) => cmd_ehrhart(c),
        Command::Convergence(f) => cmd_convergence(f),
        Command::Selftest(c) => cmd_selftest(c),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            EXIT_VERIFICATION
        }
    }
}

fn wants(c: &CommonArgs, e: Emit) -> bool {
    c.emit.contains(&e)
}

fn fmt(x: f64) -> String {
    format!("{x:e}")
}

fn run_analysis(args: &SourceArgs) -> Result<(Analysis, f64, bool), Failure> {
    let data = load_source(args)?;
    let target = scaled_target_err(data.level, data.weight, args.common.precision);
    let detected = data.sign.is_none();
    let a = analyze(&data, Some(target)).map_err(classify)?;
    Ok((a, target, detected))
}

fn root_rows(roots: &zetaperiod::RootSet) -> Vec<Vec<String>> {
    roots
        .roots
        .iter()
        .zip(&roots.residuals)
        .map(|(r, res)| vec![fmt(r.re), fmt(r.im), fmt(*res)])
        .collect()
}

fn emit_roots(sink: &mut Sink, c: &CommonArgs, a: &Analysis) -> Result<(), Failure> {
    if wants(c, Emit::Csv) {
        sink.csv("period_roots.csv", &["re", "im", "residual"], &root_rows(&a.period_roots))?;
        if let Some(r) = a.zeta_roots() {
            sink.csv("zeta_roots.csv", &["re", "im", "residual"], &root_rows(r))?;
        }
    }
    if wants(c, Emit::Svg) {
        let title = format!("Roots of R_f(z), {}", a.label);
        sink.text("period_roots.svg", &scatter(&title, &a.period_roots.roots, Guide::UnitCircle))?;
        if let Some(r) = a.zeta_roots() {
            let title = format!("Roots of Z_f(s), {}", a.label);
            sink.text("zeta_roots.svg", &scatter(&title, &r.roots, Guide::CriticalLine))?;
        }
    }
    Ok(())
}

fn cmd_analyze(args: &SourceArgs) -> Result<bool, Failure> {
    let c = &args.common;
    let (a, target, detected) = run_analysis(args)?;
    let mut sink = Sink::new(&c.output)?;
    if wants(c, Emit::Json) {
        sink.json("report.json", &crate::report::analysis(&a, c.precision, target, detected))?;
    }
    if wants(c, Emit::Csv) {
        let lv: Vec<Vec<String>> = a
            .lvalues
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| vec![(j + 1).to_string(), fmt(*v), fmt(a.bloch_kato.ctilde[j])])
            .collect();
        sink.csv("lvalues.csv", &["s", "completed", "ctilde"], &lv)?;
        let n = a.period_poly.coeffs().len().max(a.direct.poly.coeffs().len());
        let coeffs: Vec<Vec<String>> = (0..n)
            .map(|i| {
                vec![
                    i.to_string(),
                    fmt(a.period_poly.coeff(i)),
                    fmt(a.direct.poly.coeff(i)),
                    fmt(a.rv.poly.coeff(i)),
                ]
            })
            .collect();
        sink.csv("coefficients.csv", &["power", "period_poly", "zeta_direct", "zeta_rv"], &coeffs)?;
    }
    emit_roots(&mut sink, c, &a)?;
    println!("{} (N = {}, k = {}, sign {:+})", a.label, a.level, a.weight, a.sign.value());
    if let Some(r) = a.zeta_roots() {
        let mut heights: Vec<f64> = r.roots.iter().filter(|z| z.im >= 0.0).map(|z| z.im).collect();
        heights.sort_by(|x, y| y.total_cmp(x));
        let shown: Vec<String> = heights.iter().map(|h| format!("1/2 ± {h:.3}i")).collect();
        println!("Z_f roots: {}", shown.join(", "));
    }
    for check in a.verification.checks.iter().chain(&a.rv_verification.checks) {
        if !check.passed {
            println!("failed: {} = {:e} (threshold {:e})", check.name, check.value, check.threshold);
        }
    }
    println!("verification: {}", if a.passed() { "passed" } else { "FAILED" });
    for p in &sink.written {
        println!("wrote {}", p.display());
    }
    Ok(a.passed())
}

fn cmd_roots(args: &SourceArgs) -> Result<bool, Failure> {
    let c = &args.common;
    let (a, _, _) = run_analysis(args)?;
    let mut sink = Sink::new(&c.output)?;
    if wants(c, Emit::Json) {
        sink.json("roots.json", &crate::report::roots(&a))?;
    }
    emit_roots(&mut sink, c, &a)?;
    for (name, roots) in [("R_f", Some(&a.period_roots)), ("Z_f", a.zeta_roots())] {
        if let Some(r) = roots {
            for z in &r.roots {
                println!("{name} {:+.12} {:+.12}i", z.re, z.im);
            }
        }
    }
    Ok(a.zeta_roots().is_some())
}

fn need_weight(c: &CommonArgs) -> Result<u32, Failure> {
    c.weight.ok_or_else(|| Failure::Input("--weight is required".into()))
}

fn cmd_hk(c: &CommonArgs) -> Result<bool, Failure> {
    let k = need_weight(c)?;
    let pair = build_h_polys(k).map_err(classify)?;
    let mut solved = Vec::new();
    let mut ok = true;
    for sign in [Sign::Minus, Sign::Plus] {
        let cot = solve_hk_zeros(k, sign).map_err(classify)?;
        let roots = find_roots(&pair.zeta_shape(sign), DEFAULT_ROOT_TOL).map_err(classify)?;
        let dist = root_distance(&cot.zeros(), &roots.roots).map_err(classify)?;
        ok &= dist < HK_AGREEMENT;
        solved.push((sign, cot, roots, dist));
    }
    let mut sink = Sink::new(&c.output)?;
    if wants(c, Emit::Json) {
        sink.json("hk.json", &crate::report::hk(&pair, &solved))?;
    }
    if wants(c, Emit::Csv) {
        let n = pair.h_plus.coeffs().len();
        let rows: Vec<Vec<String>> = (0..n)
            .map(|i| {
                let minus = if i < pair.h_minus.coeffs().len() { rational_string(&pair.h_minus.coeff(i)) } else { String::new() };
                vec![i.to_string(), rational_string(&pair.h_plus.coeff(i)), minus]
            })
            .collect();
        sink.csv("hk_coeffs.csv", &["power", "h_plus", "h_minus"], &rows)?;
        let zeros: Vec<Vec<String>> = solved
            .iter()
            .flat_map(|(sign, cot, _, _)| {
                cot.targets
                    .iter()
                    .zip(&cot.heights)
                    .map(|(t, h)| vec![sign.value().to_string(), fmt(*t), fmt(*h)])
                    .collect::<Vec<_>>()
            })
            .collect();
        sink.csv("hk_zeros.csv", &["sign", "target", "height"], &zeros)?;
    }
    if wants(c, Emit::Svg) {
        for (sign, cot, _, _) in &solved {
            let name = if *sign == Sign::Minus { "hk_minus_zeros.svg" } else { "hk_plus_zeros.svg" };
            let title = format!("Zeros of H_{k}^{}(-s)", if *sign == Sign::Minus { "-" } else { "+" });
            sink.text(name, &scatter(&title, &cot.zeros(), Guide::CriticalLine))?;
        }
    }
    println!("h_minus: {}", pair.h_minus.to_strings().join(","));
    println!("h_plus: {}", pair.h_plus.to_strings().join(","));
    for (sign, cot, _, dist) in &solved {
        let hs: Vec<String> = cot.heights.iter().map(|h| format!("{h:.6}")).collect();
        println!("sign {:+}: heights {} (solver agreement {dist:.1e})", sign.value(), hs.join(", "));
    }
    Ok(ok)
}

fn cmd_ehrhart(c: &CommonArgs) -> Result<bool, Failure> {
    let k = need_weight(c)?;
    let pair = build_h_polys(k).map_err(classify)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for m in 0..=c.max_dilate {
        let count = ehrhart_count(k, m).map_err(classify)?;
        let poly = pair.h_minus.eval(&BigRational::from_integer(BigInt::from(m)));
        let matches = poly == BigRational::from_integer(BigInt::from(count));
        ok &= matches;
        println!("m={m} count={count} H_k^-(m)={} {}", rational_string(&poly), if matches { "ok" } else { "MISMATCH" });
        rows.push((m, count, rational_string(&poly), matches));
    }
    let mut sink = Sink::new(&c.output)?;
    if wants(c, Emit::Json) {
        sink.json("ehrhart.json", &crate::report::ehrhart(k, &rows))?;
    }
    if wants(c, Emit::Csv) {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|(m, n, p, ok)| vec![m.to_string(), n.to_string(), p.clone(), ok.to_string()])
            .collect();
        sink.csv("ehrhart.csv", &["m", "count", "h_minus", "match"], &table)?;
    }
    Ok(ok)
}

fn cmd_convergence(args: &FamilyArgs) -> Result<bool, Failure> {
    let c = &args.common;
    check_precision(c.precision)?;
    let family: Vec<NewformData> = if args.input.is_empty() {
        let k = need_weight(c)?;
        let sign = parse_sign(c.sign)?.ok_or_else(|| Failure::Input("--sign is required without --input".into()))?;
        corpus::family(k, sign)
    } else {
        args.input.iter().map(|p| load_file(p, c)).collect::<Result<_, _>>()?
    };
    if family.is_empty() {
        return Err(Failure::Input("no newforms in the family".into()));
    }
    let table = convergence_study(&family).map_err(classify)?;
    let mut sink = Sink::new(&c.output)?;
    if wants(c, Emit::Json) {
        sink.json("convergence.json", &crate::report::convergence(&table))?;
    }
    if wants(c, Emit::Csv) {
        let rows: Vec<Vec<String>> = table
            .rows
            .iter()
            .map(|r| vec![r.label.clone(), r.level.to_string(), fmt(r.distance)])
            .collect();
        sink.csv("convergence.csv", &["label", "level", "distance"], &rows)?;
    }
    if wants(c, Emit::Svg) {
        let pts: Vec<_> = table.rows.iter().flat_map(|r| r.roots.iter().copied()).collect();
        let title = format!("Z_f roots, weight {}, sign {:+}", table.weight, table.sign.value());
        sink.text("convergence.svg", &scatter(&title, &pts, Guide::CriticalLine))?;
    }
    for r in &table.rows {
        println!("{:>16} N={:<6} distance {:.6}", r.label, r.level, r.distance);
    }
    println!("Kendall tau {:+.3}, last below first: {}", table.kendall_tau, table.last_below_first);
    Ok(true)
}

fn cmd_selftest(c: &CommonArgs) -> Result<bool, Failure> {
    let outcomes = selftest::run_all();
    for o in &outcomes {
        println!("{}", o.summary());
        for d in &o.details {
            println!("    {d}");
        }
    }
    if wants(c, Emit::Json) {
        let mut sink = Sink::new(&c.output)?;
        sink.json("selftest.json", &serde_json::to_value(&outcomes).expect("outcomes serialize"))?;
    }
    Ok(outcomes.iter().all(|o| o.passed))
}
