//! Assembly of `Z_f(s)` by the moment/Stirling formula and by the
//! Rodriguez-Villegas transform of the period polynomial, plus verification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial, factorial, StirlingTable};
use crate::error::{Error, Result};
use crate::lvalues::CompletedLValues;
use crate::newform::{NewformData, Sign};
use crate::poly::{
    find_roots, newton_interpolate, poly_reflect_functional, rational_from_f64, rational_to_f64,
    series_coeffs_of_ratio, Poly, RationalPoly, RealPoly, RootSet, Scalar, DEFAULT_ROOT_TOL, DEFAULT_TRUNCATION,
};

pub const FE_TOLERANCE: f64 = 1e-9;
pub const CRITICAL_LINE_TOLERANCE: f64 = 1e-8;
pub const CROSS_ROUTE_TOLERANCE: f64 = 1e-9;
pub const REMAINDER_TOLERANCE: f64 = 1e-8;
pub const MOMENT_IDENTITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaRoute {
    Direct,
    RvTransform,
}

#[derive(Debug, Clone)]
pub struct ZetaPolynomial {
    /// Normalized real polynomial in `s`.
    pub poly: RealPoly,
    /// The same polynomial before rounding, when assembled exactly from the
    /// floating L-values.
    pub exact: Option<RationalPoly>,
    pub route: ZetaRoute,
    pub source: String,
    pub eps: Sign,
    pub weight: u32,
    /// `M_f(0), ..., M_f(k-2)`.
    pub moments: Vec<f64>,
    /// Leading coefficients dropped by normalization, highest degree first.
    pub dropped: Vec<f64>,
    /// Relative remainder of the `(1 - z)` division on the RV route.
    pub division_remainder: Option<f64>,
}

impl ZetaPolynomial {
    pub fn expected_degree(&self) -> usize {
        expected_degree(self.weight, self.eps)
    }
}

pub fn expected_degree(k: u32, eps: Sign) -> usize {
    match eps {
        Sign::Plus => k as usize - 2,
        Sign::Minus => k as usize - 3,
    }
}

fn lifted(lv: &CompletedLValues) -> Vec<BigRational> {
    lv.values.iter().map(|&v| rational_from_f64(v)).collect()
}

fn check_length(lv: &CompletedLValues, k: u32) -> Result<()> {
    if lv.values.len() + 1 != k as usize {
        return Err(Error::Validation(format!(
            "expected {} critical values for weight {k}, got {}",
            k - 1,
            lv.values.len()
        )));
    }
    Ok(())
}

/// `M_f(m) = (1/(k-2)!) sum_j C(k-2, j) Λ(f, j+1) j^m` over the exact lift of
/// the floating L-values; `0^0 = 1`.
pub fn exact_weighted_moments(lv: &CompletedLValues, k: u32) -> Result<Vec<BigRational>> {
    check_length(lv, k)?;
    let n = k as u64 - 2;
    let lam = lifted(lv);
    let inv_fact = BigRational::new(BigInt::one(), factorial(n));
    let weighted: Vec<BigRational> = (0..=n)
        .map(|j| BigRational::from_integer(binomial(n, j as i64)) * &lam[j as usize])
        .collect();
    Ok((0..=n as u32)
        .map(|m| {
            let sum = weighted.iter().enumerate().fold(BigRational::zero(), |acc, (j, w)| {
                acc + w * BigRational::from_integer(BigInt::from(j).pow(m))
            });
            sum * &inv_fact
        })
        .collect())
}

pub fn weighted_moments(lv: &CompletedLValues, k: u32) -> Result<Vec<f64>> {
    Ok(exact_weighted_moments(lv, k)?.iter().map(rational_to_f64).collect())
}

/// `R_f(z) = sum_j C(k-2, j) Λ(f, k-1-j) z^j`.
pub fn period_polynomial(lv: &CompletedLValues, k: u32) -> Result<RealPoly> {
    Ok(exact_period_polynomial(lv, k)?.to_f64())
}

pub fn exact_period_polynomial(lv: &CompletedLValues, k: u32) -> Result<RationalPoly> {
    check_length(lv, k)?;
    let n = k as u64 - 2;
    let lam = lifted(lv);
    Ok(RationalPoly::new(
        (0..=n)
            .map(|j| BigRational::from_integer(binomial(n, j as i64)) * &lam[(n - j) as usize])
            .collect(),
    ))
}

fn finish(
    exact: RationalPoly,
    route: ZetaRoute,
    source: &str,
    eps: Sign,
    k: u32,
    moments: Vec<f64>,
    division_remainder: Option<f64>,
) -> ZetaPolynomial {
    let norm = exact.to_f64().normalized(DEFAULT_TRUNCATION);
    ZetaPolynomial {
        poly: norm.poly,
        exact: Some(exact),
        route,
        source: source.to_string(),
        eps,
        weight: k,
        moments,
        dropped: norm.dropped,
        division_remainder,
    }
}

/// `Z_f(s) = ε sum_h (-s)^h sum_m C(m+h, h) s(k-2, m+h) M_f(m)`.
pub fn zeta_direct(
    moments: &[BigRational],
    k: u32,
    eps: Sign,
    stirling: &StirlingTable,
    source: &str,
) -> Result<ZetaPolynomial> {
    let n = k as usize - 2;
    if moments.len() != n + 1 {
        return Err(Error::Validation(format!("expected {} moments, got {}", n + 1, moments.len())));
    }
    if stirling.n_max() < n {
        return Err(Error::Validation(format!("Stirling table stops at {} < {n}", stirling.n_max())));
    }
    let coeffs: Vec<BigRational> = (0..=n)
        .map(|h| {
            let inner = (0..=n - h).fold(BigRational::zero(), |acc, m| {
                let c = binomial((m + h) as u64, h as i64) * stirling.get(n, m + h);
                acc + BigRational::from_integer(c) * &moments[m]
            });
            let signed = if h % 2 == 1 { -inner } else { inner };
            if eps == Sign::Minus {
                -signed
            } else {
                signed
            }
        })
        .collect();
    let floats = moments.iter().map(rational_to_f64).collect();
    Ok(finish(RationalPoly::new(coeffs), ZetaRoute::Direct, source, eps, k, floats, None))
}

/// Rodriguez-Villegas transform: for `u` of degree `e` with `u(1) != 0`,
/// `H` interpolates the series coefficients of `u(z) / (1 - z)^{e+1}` and the
/// result is `H(-s)`.
pub fn rv_transform<T: Scalar>(u: &Poly<T>) -> Result<Poly<T>> {
    let at_one = u.coeffs().iter().fold(T::zero(), |acc, c| acc + c.clone());
    let scale: f64 = u.coeffs().iter().map(Scalar::magnitude).sum();
    if u.is_zero() || at_one.magnitude() <= DEFAULT_TRUNCATION * scale {
        return Err(Error::ValueAtOneVanishes(at_one.magnitude()));
    }
    let e = u.degree();
    let series = series_coeffs_of_ratio(u, e + 1, e + 1);
    let points: Vec<(T, T)> = series
        .into_iter()
        .enumerate()
        .map(|(n, c)| (T::from_i64(n as i64), c))
        .collect();
    Ok(newton_interpolate(&points, e)?.reflect_sign())
}

/// `Z_f` through the transform of `R_f`, or of `R_f / (1 - z)` when `ε = -1`.
/// The result is `ε` times the transform so that it matches the direct route.
pub fn zeta_via_rv(rf: &RealPoly, k: u32, eps: Sign, source: &str) -> Result<ZetaPolynomial> {
    let exact = rf.to_rational();
    let (u, remainder) = match eps {
        Sign::Plus => (exact, None),
        Sign::Minus => {
            let (q, r) = exact.div_one_minus_z();
            let scale: f64 = rf.coeffs().iter().map(|c| c.abs()).sum();
            let rel = if scale == 0.0 { 0.0 } else { rational_to_f64(&r).abs() / scale };
            if rel >= REMAINDER_TOLERANCE {
                return Err(Error::RemainderTooLarge(rel));
            }
            (q, Some(rel))
        }
    };
    let mut z = rv_transform(&u)?;
    if eps == Sign::Minus {
        z = -&z;
    }
    Ok(finish(z, ZetaRoute::RvTransform, source, eps, k, Vec::new(), remainder))
}

/// Coefficient-wise relative discrepancy `|a_i - b_i| / max(|a_i|, floor)`,
/// where the floor is `1e-12` of the largest coefficient.
pub fn cross_route_discrepancy(a: &RealPoly, b: &RealPoly) -> f64 {
    let n = a.coeffs().len().max(b.coeffs().len());
    let floor = 1e-12 * a.max_abs_coeff().max(b.max_abs_coeff());
    (0..n)
        .map(|i| {
            let (x, y) = (a.coeff(i), b.coeff(i));
            let denom = x.abs().max(y.abs()).max(floor);
            if denom == 0.0 {
                0.0
            } else {
                (x - y).abs() / denom
            }
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratingFunctionCheck {
    pub n_max: usize,
    /// `max_n |Z(-n) - ε c_n| / |c_n|` where `c_n` are the series
    /// coefficients of `R_f(z) / (1 - z)^{k-1}`.
    pub max_rel_residual: f64,
    /// Same comparison without the factor `ε`.
    pub unsigned_max_rel_residual: f64,
    pub passed: bool,
}

/// Compare `Z_f(-n)` with the series of `R_f(z) / (1 - z)^{k-1}` for
/// `n = 0..=2(k-2)`, past the interpolation window.
pub fn generating_function_check(zp: &ZetaPolynomial, rf: &RealPoly) -> GeneratingFunctionCheck {
    let k = zp.weight as usize;
    let n_max = 2 * (k - 2);
    let series = series_coeffs_of_ratio(&rf.to_rational(), k - 1, n_max + 1);
    let z_exact = zp.exact.clone().unwrap_or_else(|| zp.poly.to_rational());
    let eps = BigRational::from_integer(BigInt::from(zp.eps.value()));
    let mut signed = 0.0_f64;
    let mut unsigned = 0.0_f64;
    let floor = series.iter().map(|c| c.abs()).max().map(|m| rational_to_f64(&m) * 1e-12).unwrap_or(0.0);
    for (n, c) in series.iter().enumerate() {
        let zv = z_exact.eval(&BigRational::from_integer(-BigInt::from(n)));
        let denom = rational_to_f64(&c.abs()).max(floor);
        if denom == 0.0 {
            continue;
        }
        signed = signed.max(rational_to_f64(&(&zv - &eps * c).abs()) / denom);
        unsigned = unsigned.max(rational_to_f64(&(&zv - c).abs()) / denom);
    }
    GeneratingFunctionCheck {
        n_max,
        max_rel_residual: signed,
        unsigned_max_rel_residual: unsigned,
        passed: signed < CROSS_ROUTE_TOLERANCE,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlochKatoVector {
    /// `ctilde[j]` is `C̃(j + 1)`.
    pub ctilde: Vec<f64>,
    /// `max_m |M_f(m) - sum_j C̃(j+1) j^m| / sum_j |C̃(j+1)| j^m`.
    pub identity_residual: f64,
    pub passed: bool,
}

/// `C̃(j+1) = X^{j+1} L(f, j+1) / (k-2-j)!` with `X = √N / 2π`, which is
/// `Λ(f, j+1) / (j! (k-2-j)!)`. Entries whose L-value is zero within twice
/// the error bound are set to zero.
pub fn bloch_kato_moments(lv: &CompletedLValues, data: &NewformData) -> Result<BlochKatoVector> {
    let k = data.weight;
    check_length(lv, k)?;
    let n = k as u64 - 2;
    let slack = 2.0 * lv.err_bound;
    let ctilde: Vec<f64> = (0..=n)
        .map(|j| {
            let lam = lv.values[j as usize];
            if lam.abs() <= slack {
                0.0
            } else {
                let denom = (factorial(j) * factorial(n - j)).to_f64().unwrap_or(f64::INFINITY);
                lam / denom
            }
        })
        .collect();
    let moments = exact_weighted_moments(lv, k)?;
    let mut worst = 0.0_f64;
    for (m, moment) in moments.iter().enumerate() {
        let mut sum = BigRational::zero();
        let mut abs_sum = 0.0;
        for (j, c) in ctilde.iter().enumerate() {
            let w = (j as f64).powi(m as i32);
            sum += rational_from_f64(*c) * BigRational::from_integer(BigInt::from(j).pow(m as u32));
            abs_sum += c.abs() * w;
        }
        // moments use the raw Λ entries; zeroed entries differ by at most slack
        let diff = rational_to_f64(&(moment - sum).abs());
        if abs_sum > 0.0 {
            worst = worst.max(diff / abs_sum);
        } else {
            worst = worst.max(diff);
        }
    }
    Ok(BlochKatoVector { ctilde, identity_residual: worst, passed: worst < MOMENT_IDENTITY_TOLERANCE })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn below(name: &str, value: f64, threshold: f64) -> Check {
        Check { name: name.to_string(), value, threshold, passed: value.is_finite() && value < threshold }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub route: ZetaRoute,
    pub degree: usize,
    pub expected_degree: usize,
    pub fe_residual: f64,
    pub max_re_deviation: f64,
    pub max_height: f64,
    /// `(k-3)(k-7/2)` or `(k-4)(k-9/2)`; only applied for `k >= 6`.
    pub height_bound: Option<f64>,
    pub cross_route_discrepancy: Option<f64>,
    pub roots: Option<RootSet>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub fn height_bound(k: u32, eps: Sign) -> Option<f64> {
    if k < 6 {
        return None;
    }
    let k = k as f64;
    Some(match eps {
        Sign::Plus => (k - 3.0) * (k - 3.5),
        Sign::Minus => (k - 4.0) * (k - 4.5),
    })
}

/// Functional equation, critical line, height bound, degree and (when a
/// second route is given) cross-route agreement.
pub fn verify(zp: &ZetaPolynomial, other: Option<&ZetaPolynomial>) -> VerificationReport {
    let mut checks = Vec::new();
    let fe = poly_reflect_functional(&zp.poly, zp.eps.value());
    checks.push(Check::below("functional_equation", fe, FE_TOLERANCE));

    let degree = zp.poly.degree();
    let expected = zp.expected_degree();
    checks.push(Check {
        name: "degree".into(),
        value: degree as f64,
        threshold: expected as f64,
        passed: degree == expected,
    });

    let roots = find_roots(&zp.poly, DEFAULT_ROOT_TOL).ok();
    let (re_dev, height) = match &roots {
        Some(r) => (r.max_distance_from_line(0.5), r.max_abs_im()),
        None => (f64::INFINITY, f64::INFINITY),
    };
    if degree > 0 {
        checks.push(Check::below("critical_line", re_dev, CRITICAL_LINE_TOLERANCE));
    }
    let bound = height_bound(zp.weight, zp.eps);
    if let Some(b) = bound {
        checks.push(Check::below("height_bound", height, b));
    }
    let cross = other.map(|o| cross_route_discrepancy(&zp.poly, &o.poly));
    if let Some(c) = cross {
        checks.push(Check::below("cross_route", c, CROSS_ROUTE_TOLERANCE));
    }
    let passed = checks.iter().all(|c| c.passed);
    VerificationReport {
        route: zp.route,
        degree,
        expected_degree: expected,
        fe_residual: fe,
        max_re_deviation: re_dev,
        max_height: height,
        height_bound: bound,
        cross_route_discrepancy: cross,
        roots,
        checks,
        passed,
    }
}
