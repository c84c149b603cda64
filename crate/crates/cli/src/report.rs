//! JSON documents written by the commands. Exact rationals are strings
//! `"p/q"`; everything else is plain JSON numbers.

use num_complex::Complex64;
use serde_json::{json, Value};

use zetaperiod::analysis::Analysis;
use zetaperiod::hilbert::{ConvergenceTable, CotSolverResult, HPolyPair};
use zetaperiod::poly::RootSet;
use zetaperiod::zeta::{VerificationReport, ZetaPolynomial};
use zetaperiod::Sign;

pub fn complex(z: &Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn root_list(roots: &RootSet) -> Value {
    Value::Array(
        roots
            .roots
            .iter()
            .zip(&roots.residuals)
            .map(|(r, res)| json!({ "re": r.re, "im": r.im, "residual": res }))
            .collect(),
    )
}

fn roots_block(roots: &RootSet) -> Value {
    json!({
        "method": roots.method,
        "sweeps": roots.sweeps,
        "max_residual": roots.max_residual(),
        "values": root_list(roots),
    })
}

fn zeta_block(z: &ZetaPolynomial) -> Value {
    let mut v = json!({
        "route": z.route,
        "degree": z.poly.degree(),
        "coeffs": z.poly.coeffs(),
        "dropped_leading": z.dropped,
        "division_remainder": z.division_remainder,
    });
    if !z.moments.is_empty() {
        v["moments"] = json!(z.moments);
    }
    v
}

fn verification_block(v: &VerificationReport) -> Value {
    json!({
        "passed": v.passed,
        "degree": v.degree,
        "expected_degree": v.expected_degree,
        "fe_residual": v.fe_residual,
        "max_re_deviation": v.max_re_deviation,
        "max_height": v.max_height,
        "height_bound": v.height_bound,
        "cross_route_discrepancy": v.cross_route_discrepancy,
        "checks": v.checks,
    })
}

pub fn sign_value(s: Sign) -> i32 {
    s.value()
}

/// The `analyze` report.
pub fn analysis(a: &Analysis, precision: f64, target_err: f64, sign_detected: bool) -> Value {
    let zeta_roots = a.zeta_roots();
    json!({
        "meta": {
            "label": a.label,
            "level": a.level,
            "weight": a.weight,
            "sign": sign_value(a.sign),
            "sign_source": if sign_detected { "detected" } else { "input" },
            "precision": precision,
            "target_err": target_err,
            "version": env!("CARGO_PKG_VERSION"),
        },
        "lvalues": {
            "completed": a.lvalues.values,
            "err_bound": a.lvalues.err_bound,
            "terms_used": a.lvalues.terms_used,
            "invariant_violations": a.lvalue_violations,
        },
        "period_poly": {
            "coeffs": a.period_poly.coeffs(),
            "unit_circle_deviation": a.unit_circle_deviation,
        },
        "zeta_poly": {
            "direct": zeta_block(&a.direct),
            "rv": zeta_block(&a.rv),
        },
        "roots": {
            "period_poly": roots_block(&a.period_roots),
            "zeta_poly": zeta_roots.map(roots_block),
        },
        "verification": {
            "passed": a.passed(),
            "direct": verification_block(&a.verification),
            "rv": verification_block(&a.rv_verification),
            "generating_function": a.generating_function,
            "unit_circle_deviation": a.unit_circle_deviation,
        },
        "bloch_kato": a.bloch_kato,
        "timing": {
            "terms_used": a.lvalues.terms_used,
            "period_root_sweeps": a.period_roots.sweeps,
            "zeta_root_sweeps": zeta_roots.map(|r| r.sweeps),
        },
    })
}

pub fn roots(a: &Analysis) -> Value {
    json!({
        "label": a.label,
        "period_poly": roots_block(&a.period_roots),
        "zeta_poly": a.zeta_roots().map(roots_block),
    })
}

pub fn hk(pair: &HPolyPair, solved: &[(Sign, CotSolverResult, RootSet, f64)]) -> Value {
    let zeros: Vec<Value> = solved
        .iter()
        .map(|(sign, cot, roots, dist)| {
            json!({
                "sign": sign_value(*sign),
                "targets": cot.targets,
                "cot_heights": cot.heights,
                "root_finder": root_list(roots),
                "max_distance": dist,
            })
        })
        .collect();
    json!({
        "k": pair.k,
        "h_plus": pair.h_plus.to_strings(),
        "h_minus": pair.h_minus.to_strings(),
        "zeros": zeros,
    })
}

pub fn ehrhart(k: u32, rows: &[(u32, u64, String, bool)]) -> Value {
    json!({
        "k": k,
        "rows": rows
            .iter()
            .map(|(m, count, poly, ok)| json!({ "m": m, "count": count, "h_minus": poly, "match": ok }))
            .collect::<Vec<_>>(),
    })
}

pub fn convergence(t: &ConvergenceTable) -> Value {
    json!({
        "weight": t.weight,
        "sign": sign_value(t.sign),
        "limit_roots": t.limit_roots.iter().map(complex).collect::<Vec<_>>(),
        "rows": t.rows.iter().map(|r| json!({
            "label": r.label,
            "level": r.level,
            "distance": r.distance,
            "roots": r.roots.iter().map(complex).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "kendall_tau": t.kendall_tau,
        "last_below_first": t.last_below_first,
    })
}
