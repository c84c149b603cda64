//! Completed critical L-values via the two-tail (approximate functional
//! equation) series.
//!
//! With `X = √N / 2π` and a split point `t > 0`,
//!
//! ```text
//! Λ(f, s) = Σ a_n (X/n)^s Γ(s, n t / X) + ε Σ a_n (X/n)^{k-s} Γ(k - s, n / (t X))
//! ```
//!
//! At integer `s` both incomplete gammas have integer order and a closed form.
//! `t = 1` is the symmetric split used for evaluation; other `t` give
//! the same values only for the correct `ε`, which is how the sign is found.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::newform::{NewformData, Sign};

/// Split point used by sign detection.
pub const SIGN_SPLIT: f64 = 1.25;

/// `ln Γ(m, x)` for integer `m >= 1`, `x > 0`, from
/// `Γ(m, x) = (m-1)! e^{-x} Σ_{i<m} x^i / i!`.
fn ln_gamma_upper_int(m: u32, x: f64) -> f64 {
    debug_assert!(m >= 1 && x > 0.0);
    let mut log_terms = Vec::with_capacity(m as usize);
    let mut log_term = 0.0;
    log_terms.push(0.0);
    let lx = x.ln();
    for i in 1..m {
        log_term += lx - (i as f64).ln();
        log_terms.push(log_term);
    }
    let top = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // all terms positive: sum smallest to largest
    let mut scaled: Vec<f64> = log_terms.iter().map(|l| (l - top).exp()).collect();
    scaled.sort_by(f64::total_cmp);
    let sum: f64 = scaled.iter().sum();
    let ln_fact: f64 = (1..m).map(|i| (i as f64).ln()).sum();
    ln_fact - x + top + sum.ln()
}

/// Upper incomplete gamma function `Γ(m, x)` at positive integer order.
pub fn gamma_upper_int(m: u32, x: f64) -> f64 {
    assert!(m >= 1, "order must be positive");
    assert!(x > 0.0, "argument must be positive");
    ln_gamma_upper_int(m, x).exp()
}

/// `Λ(f, 1), ..., Λ(f, k-1)` with a shared truncation point.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedLValues {
    /// `values[j]` is `Λ(f, j + 1)`.
    pub values: Vec<f64>,
    pub err_bound: f64,
    pub terms_used: usize,
}

impl CompletedLValues {
    pub fn weight(&self) -> u32 {
        self.values.len() as u32 + 1
    }

    /// `Λ(f, s)` for `1 <= s <= k-1`.
    pub fn at(&self, s: u32) -> f64 {
        self.values[s as usize - 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// `max_j |Λ(f, j+1) - ε Λ(f, k-1-j)|`.
    pub fn functional_equation_residual(&self, sign: Sign) -> f64 {
        let n = self.values.len();
        (0..n)
            .map(|j| (self.values[j] - sign.as_f64() * self.values[n - 1 - j]).abs())
            .fold(0.0, f64::max)
    }

    /// Violated invariants, empty when all hold.
    pub fn invariant_violations(&self, sign: Sign) -> Vec<String> {
        let mut out = Vec::new();
        let k = self.weight();
        let slack = 2.0 * self.err_bound;
        let central = self.at(k / 2);
        if central < -slack {
            out.push(format!("central value Λ(f,{}) = {central:.3e} is negative", k / 2));
        }
        for s in k / 2..k - 1 {
            if self.at(s) > self.at(s + 1) + slack {
                out.push(format!("Λ(f,{s}) > Λ(f,{})", s + 1));
            }
        }
        if sign == Sign::Minus && central.abs() > slack {
            out.push(format!("sign -1 but central value {central:.3e} is not zero"));
        }
        let fe = self.functional_equation_residual(sign);
        if fe >= 4.0 * self.err_bound {
            out.push(format!("functional-equation residual {fe:.3e} exceeds 4 err_bound"));
        }
        out
    }
}

fn x_scale(level: u64) -> f64 {
    (level as f64).sqrt() / std::f64::consts::TAU
}

/// Default relative precision for [`scaled_target_err`].
pub const DEFAULT_PRECISION: f64 = 1e-12;

/// Absolute target `precision * X^{k-1} (k-2)!`; the scale is the size of the
/// largest critical value up to a factor near one.
pub fn scaled_target_err(level: u64, weight: u32, precision: f64) -> f64 {
    let ln_fact: f64 = (1..weight - 1).map(|i| (i as f64).ln()).sum();
    precision * ((weight as f64 - 1.0) * x_scale(level).ln() + ln_fact).exp()
}

pub fn default_target_err(data: &NewformData) -> f64 {
    scaled_target_err(data.level, data.weight, DEFAULT_PRECISION)
}

/// Coefficients needed for both the symmetric evaluation and sign detection.
pub fn required_terms(level: u64, weight: u32, target_err: f64) -> usize {
    truncation_point(level, weight, target_err, 1.0).max(truncation_point(level, weight, target_err, SIGN_SPLIT))
}

/// `ln` of a proven bound on `Σ_{n > n0} n^{(k+1)/2} (X/n)^m Γ(m, c n)`, or
/// `None` when the geometric tail argument does not apply yet at `n0`.
///
/// For `c n >= 1`, `Σ_{i<m} x^i/i! <= m x^{m-1}` gives
/// `Γ(m, c n) <= m! (c n)^{m-1} e^{-c n}`, so each term is at most
/// `B(n) = m! X^m c^{m-1} n^{(k-1)/2} e^{-c n}`; consecutive ratios
/// `(1 + 1/n)^{(k-1)/2} e^{-c}` decrease in `n`, bounding the tail by a
/// geometric series. `|a_n| <= d(n) n^{(k-1)/2} <= n^{(k+1)/2}` supplies the
/// coefficient bound.
fn ln_tail_bound(n0: usize, k: u32, m: u32, x: f64, c: f64) -> Option<f64> {
    let n = (n0 + 1) as f64;
    if c * n < 1.0 {
        return None;
    }
    let p = (k as f64 - 1.0) / 2.0;
    let ratio = (p * (1.0 + 1.0 / n).ln() - c).exp();
    if ratio >= 1.0 {
        return None;
    }
    let ln_m_fact: f64 = (1..=m).map(|i| (i as f64).ln()).sum();
    let ln_b = ln_m_fact + m as f64 * x.ln() + (m as f64 - 1.0) * c.ln() + p * n.ln() - c * n;
    Some(ln_b - (1.0 - ratio).ln())
}

/// Smallest `n_max` whose tail bound, summed over both tails and all
/// critical `s`, stays below `target_err`.
pub fn truncation_point(level: u64, weight: u32, target_err: f64, split: f64) -> usize {
    let x = x_scale(level);
    let c1 = split / x;
    let c2 = 1.0 / (split * x);
    let ln_target = target_err.ln();
    let fits = |n0: usize| {
        (1..weight).all(|s| {
            let a = ln_tail_bound(n0, weight, s, x, c1);
            let b = ln_tail_bound(n0, weight, weight - s, x, c2);
            match (a, b) {
                (Some(a), Some(b)) => {
                    let hi = a.max(b);
                    hi + ((a - hi).exp() + (b - hi).exp()).ln() < ln_target
                }
                _ => false,
            }
        })
    };
    let mut hi = 1usize;
    while !fits(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // fits is monotone once the geometric regime is reached; bisect down
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

struct TwoTail<'a> {
    coeffs: &'a [f64],
    weight: u32,
    x: f64,
    split: f64,
    n_max: usize,
}

impl TwoTail<'_> {
    /// Value and `Σ |terms|` at integer `s`.
    fn eval(&self, s: u32, sign: Sign) -> (f64, f64) {
        let k = self.weight;
        let eps = sign.as_f64();
        let mut terms = Vec::with_capacity(2 * self.n_max);
        for n in 1..=self.n_max {
            let a = self.coeffs[n - 1];
            if a == 0.0 {
                continue;
            }
            let ln_xn = (self.x / n as f64).ln();
            let first = (s as f64 * ln_xn + ln_gamma_upper_int(s, n as f64 * self.split / self.x)).exp();
            let second =
                ((k - s) as f64 * ln_xn + ln_gamma_upper_int(k - s, n as f64 / (self.split * self.x))).exp();
            terms.push(a * first);
            terms.push(eps * a * second);
        }
        // small terms first
        terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        let abs_sum: f64 = terms.iter().map(|t| t.abs()).sum();
        (terms.iter().sum(), abs_sum)
    }
}

fn evaluate(data: &NewformData, sign: Sign, target_err: f64, split: f64, n_max: Option<usize>) -> Result<CompletedLValues> {
    let k = data.weight;
    let n_max = n_max.unwrap_or_else(|| truncation_point(data.level, k, target_err, split));
    if n_max > data.coeffs.len() {
        return Err(Error::InsufficientCoefficients { needed: n_max, available: data.coeffs.len() });
    }
    let coeffs = data.coeffs_f64();
    let series = TwoTail { coeffs: &coeffs, weight: k, x: x_scale(data.level), split, n_max };
    let results: Vec<(f64, f64)> = (1..k).into_par_iter().map(|s| series.eval(s, sign)).collect();
    let rounding = results.iter().map(|(_, a)| *a).fold(0.0, f64::max) * 8.0 * f64::EPSILON * (n_max as f64).sqrt();
    Ok(CompletedLValues {
        values: results.into_iter().map(|(v, _)| v).collect(),
        err_bound: target_err + rounding,
        terms_used: n_max,
    })
}

fn require_sign(data: &NewformData) -> Result<Sign> {
    data.sign.ok_or(Error::UnknownSign)
}

/// `Λ(f, s)` at a critical integer `1 <= s <= k-1`, absolute error at most `target_err`.
pub fn completed_lvalue(data: &NewformData, s: u32, target_err: f64) -> Result<f64> {
    if s < 1 || s >= data.weight {
        return Err(Error::Validation(format!("s = {s} is not critical for weight {}", data.weight)));
    }
    let sign = require_sign(data)?;
    let n_max = truncation_point(data.level, data.weight, target_err, 1.0);
    if n_max > data.coeffs.len() {
        return Err(Error::InsufficientCoefficients { needed: n_max, available: data.coeffs.len() });
    }
    let coeffs = data.coeffs_f64();
    let series = TwoTail { coeffs: &coeffs, weight: data.weight, x: x_scale(data.level), split: 1.0, n_max };
    Ok(series.eval(s, sign).0)
}

/// All critical values with the symmetric split.
pub fn all_critical_values(data: &NewformData, target_err: f64) -> Result<CompletedLValues> {
    let sign = require_sign(data)?;
    evaluate(data, sign, target_err, 1.0, None)
}

/// As [`all_critical_values`] but with an explicit truncation point.
pub fn critical_values_with_terms(data: &NewformData, n_max: usize) -> Result<CompletedLValues> {
    let sign = require_sign(data)?;
    evaluate(data, sign, 0.0, 1.0, Some(n_max))
}

/// Relative functional-equation residual of the asymmetric-split values
/// computed under the assumption `ε = sign`.
pub fn sign_residual(data: &NewformData, sign: Sign, target_err: f64) -> Result<f64> {
    let lv = evaluate(data, sign, target_err, SIGN_SPLIT, None)?;
    let scale = lv.max_abs();
    Ok(if scale == 0.0 { f64::INFINITY } else { lv.functional_equation_residual(sign) / scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    /// Composite Simpson on [a, b] with n panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_order_one_is_exponential() {
        for x in [1.0, 5.0, 10.0] {
            assert!(rel(gamma_upper_int(1, x), (-x).exp()) < 1e-14);
        }
    }

    #[test]
    fn gamma_near_zero_is_factorial() {
        // Γ(m, x) = (m-1)! (1 - x^m / m! + ...), so order 1 sits x away
        assert!(rel(gamma_upper_int(1, 1e-8), 1.0) < 1.0001e-8);
        let mut fact = 1.0;
        for m in 2..=12u32 {
            fact *= (m - 1) as f64;
            assert!(rel(gamma_upper_int(m, 1e-8), fact) < 1e-12, "m={m}");
        }
    }

    #[test]
    fn gamma_three_two_by_quadrature() {
        // ∫_2^∞ t^2 e^{-t} dt, truncated at 60 where the tail is < 1e-22
        let quad = simpson(|t| t * t * (-t).exp(), 2.0, 60.0, 20_000);
        let closed = 10.0 * (-2.0f64).exp();
        assert!(rel(quad, closed) < 1e-12);
        assert!(rel(gamma_upper_int(3, 2.0), quad) < 1e-12);
        assert!((gamma_upper_int(3, 2.0) - 1.353352832366127).abs() < 1e-14);
    }

    #[test]
    fn gamma_large_argument_stays_accurate() {
        // Γ(5, 40) = 4! e^{-40} (1 + 40 + 800 + 32000/3 + 106666.66..)
        let want = 24.0 * (-40.0f64).exp() * (1.0 + 40.0 + 800.0 + 64000.0 / 6.0 + 2560000.0 / 24.0);
        assert!(rel(gamma_upper_int(5, 40.0), want) < 1e-14);
    }

    fn delta() -> NewformData {
        NewformData::delta(80)
    }

    #[test]
    fn delta_functional_equation_ratio() {
        let lv = all_critical_values(&delta(), default_target_err(&delta())).unwrap();
        for s in 1..=11u32 {
            assert!(rel(lv.at(s), lv.at(12 - s)) < 1e-10);
        }
        assert!(lv.invariant_violations(Sign::Plus).is_empty());
    }

    #[test]
    fn delta_period_ratios() {
        let lv = all_critical_values(&delta(), default_target_err(&delta())).unwrap();
        // R_Δ coefficients C(10, j) Λ(11 - j): even part ∝ (36/691, 1, 3, 3, 1, 36/691)
        let c = |j: u32| num_traits::ToPrimitive::to_f64(&crate::combinatorics::binomial(10, j as i64)).unwrap() * lv.at(11 - j);
        assert!((c(8) - 0.114379).abs() < 5e-7);
        assert!(rel(c(10) / c(8), 36.0 / 691.0) < 1e-4);
        assert!(rel(c(6) / c(8), 3.0) < 1e-4);
        assert!(rel(c(9) / c(7), 4.0 / 25.0) < 1e-4);
        assert!(rel(c(5) / c(7), 42.0 / 25.0) < 1e-4);
        // printed to 8 decimals, truncated
        assert!((c(9) / 4.0 - 0.00926927).abs() < 1e-8);
    }

    #[test]
    fn chain_is_monotone_for_delta() {
        let lv = all_critical_values(&delta(), default_target_err(&delta())).unwrap();
        assert_eq!(lv.values.len(), 11);
        for s in 6..11 {
            assert!(lv.at(s) <= lv.at(s + 1));
        }
    }

    #[test]
    fn refinement_is_consistent() {
        let d = NewformData::delta(120);
        let coarse = all_critical_values(&d, 1e-8).unwrap();
        let fine = all_critical_values(&d, 1e-12).unwrap();
        for (a, b) in coarse.values.iter().zip(&fine.values) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn required_terms_suffice_for_detection() {
        let target = scaled_target_err(1, 12, DEFAULT_PRECISION);
        let n = required_terms(1, 12, target);
        assert!(n >= truncation_point(1, 12, target, SIGN_SPLIT));
        let mut data = NewformData::delta(n);
        data.sign = None;
        assert_eq!(crate::newform::detect_sign(&data, target).unwrap(), Sign::Plus);
        assert!(matches!(
            crate::newform::detect_sign(&NewformData::delta(n - 1), target),
            Err(Error::InsufficientCoefficients { .. })
        ));
    }

    #[test]
    fn doubling_terms_stays_within_bound() {
        for f in corpus::all() {
            let lv = all_critical_values(&f, default_target_err(&f)).unwrap();
            let wider = (2 * lv.terms_used).min(f.coeffs.len());
            let more = critical_values_with_terms(&f, wider).unwrap();
            for (a, b) in lv.values.iter().zip(&more.values) {
                assert!((a - b).abs() <= lv.err_bound, "{}: {a} vs {b}", f.label);
            }
        }
    }

    #[test]
    fn corpus_invariants_hold() {
        for f in corpus::all() {
            let lv = all_critical_values(&f, default_target_err(&f)).unwrap();
            let sign = f.sign.unwrap();
            assert!(lv.invariant_violations(sign).is_empty(), "{}: {:?}", f.label, lv.invariant_violations(sign));
        }
    }

    #[test]
    fn corpus_matches_reference_l_values() {
        // Λ(f, s) = X^s Γ(s) L(f, s) with L from an independent implementation
        for (f, reference) in corpus::all_with_reference() {
            let lv = all_critical_values(&f, default_target_err(&f)).unwrap();
            let x = x_scale(f.level);
            let mut gamma = 1.0;
            for s in 1..f.weight {
                if s > 1 {
                    gamma *= (s - 1) as f64;
                }
                let want = x.powi(s as i32) * gamma * reference[s as usize - 1];
                assert!((lv.at(s) - want).abs() < 1e-9 * lv.max_abs(), "{} s={s}: {} vs {want}", f.label, lv.at(s));
            }
        }
    }

    #[test]
    fn errors() {
        let short = NewformData::delta(3);
        assert!(matches!(
            all_critical_values(&short, 1e-12),
            Err(Error::InsufficientCoefficients { .. })
        ));
        let unsigned = NewformData { sign: None, ..delta() };
        assert!(matches!(all_critical_values(&unsigned, 1e-12), Err(Error::UnknownSign)));
        assert!(completed_lvalue(&delta(), 12, 1e-12).is_err());
        let single = completed_lvalue(&delta(), 6, 1e-14).unwrap();
        let all = all_critical_values(&delta(), 1e-14).unwrap();
        assert_eq!(single, all.at(6));
    }
}
