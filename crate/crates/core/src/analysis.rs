//! End-to-end pipeline for a single newform.

use crate::combinatorics::StirlingTable;
use crate::error::Result;
use crate::lvalues::{all_critical_values, default_target_err, CompletedLValues};
use crate::newform::{detect_sign, NewformData, Sign};
use crate::poly::{find_roots, RealPoly, RootSet, DEFAULT_ROOT_TOL};
use crate::zeta::{
    bloch_kato_moments, exact_weighted_moments, generating_function_check, period_polynomial, verify, zeta_direct,
    zeta_via_rv, BlochKatoVector, GeneratingFunctionCheck, VerificationReport, ZetaPolynomial,
};

/// Roots of `R_f` must sit on the unit circle within this distance.
pub const UNIT_CIRCLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Analysis {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub sign: Sign,
    pub lvalues: CompletedLValues,
    pub lvalue_violations: Vec<String>,
    pub period_poly: RealPoly,
    pub period_roots: RootSet,
    /// `max ||r| - 1|` over the roots of `R_f`.
    pub unit_circle_deviation: f64,
    pub direct: ZetaPolynomial,
    pub rv: ZetaPolynomial,
    pub verification: VerificationReport,
    pub rv_verification: VerificationReport,
    pub generating_function: GeneratingFunctionCheck,
    pub bloch_kato: BlochKatoVector,
}

impl Analysis {
    pub fn zeta_roots(&self) -> Option<&RootSet> {
        self.verification.roots.as_ref()
    }

    pub fn passed(&self) -> bool {
        self.lvalue_violations.is_empty()
            && self.unit_circle_deviation < UNIT_CIRCLE_TOLERANCE
            && self.verification.passed
            && self.rv_verification.passed
            && self.generating_function.passed
            && self.bloch_kato.passed
    }
}

/// Sign detected from the coefficients; a declared sign must agree. The
/// symmetric evaluation satisfies the functional equation for either sign,
/// so a wrong declaration would otherwise pass every later check.
pub fn resolve_sign(data: &NewformData, target_err: f64) -> Result<Sign> {
    detect_sign(data, target_err)
}

pub fn analyze(data: &NewformData, target_err: Option<f64>) -> Result<Analysis> {
    let target = target_err.unwrap_or_else(|| default_target_err(data));
    let sign = resolve_sign(data, target)?;
    let data = data.clone().with_sign(sign);
    let lv = all_critical_values(&data, target)?;
    analyze_lvalues(&data, sign, lv)
}

/// Everything downstream of the L-values; also used for fault injection.
pub fn analyze_lvalues(data: &NewformData, sign: Sign, lv: CompletedLValues) -> Result<Analysis> {
    let k = data.weight;
    let violations = lv.invariant_violations(sign);
    let rf = period_polynomial(&lv, k)?;
    let period_roots = find_roots(&rf, DEFAULT_ROOT_TOL)?;
    let unit_dev = period_roots.roots.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    let moments = exact_weighted_moments(&lv, k)?;
    let direct = zeta_direct(&moments, k, sign, &StirlingTable::new(k as usize - 2), &data.label)?;
    let rv = zeta_via_rv(&rf, k, sign, &data.label)?;
    let verification = verify(&direct, Some(&rv));
    let rv_verification = verify(&rv, Some(&direct));
    let generating_function = generating_function_check(&direct, &rf);
    let bloch_kato = bloch_kato_moments(&lv, data)?;
    Ok(Analysis {
        label: data.label.clone(),
        level: data.level,
        weight: k,
        sign,
        lvalues: lv,
        lvalue_violations: violations,
        period_poly: rf,
        period_roots,
        unit_circle_deviation: unit_dev,
        direct,
        rv,
        verification,
        rv_verification,
        generating_function,
        bloch_kato,
    })
}
