//! All complex roots of a dense polynomial.
//!
//! Aberth–Ehrlich simultaneous iteration is the primary method; when it
//! stalls the eigenvalues of the companion matrix are used instead. Roots of
//! exact-rational polynomials are finally polished by Newton steps evaluated
//! in exact complex-rational arithmetic, which removes the conditioning loss
//! of converting the coefficients to doubles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{rational_from_f64, rational_to_f64, Poly, Scalar, ScalarKind};
use crate::error::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-11;
const MAX_SWEEPS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    Aberth,
    Companion,
    BisectionHk,
}

/// Root multiset with per-root backward-error residuals
/// `|p(r)| / sum_i |c_i| |r|^i`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub method: RootMethod,
    pub sweeps: usize,
}

impl RootSet {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `max |Re(r) - re|` over all roots.
    pub fn max_distance_from_line(&self, re: f64) -> f64 {
        self.roots.iter().map(|r| (r.re - re).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_im(&self) -> f64 {
        self.roots.iter().map(|r| r.im.abs()).fold(0.0, f64::max)
    }
}

fn backward_error(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let mut value = Complex64::zero();
    let mut scale = 0.0;
    for c in coeffs.iter().rev() {
        value = value * z + c;
        scale = scale * r + c.norm();
    }
    if scale == 0.0 {
        0.0
    } else {
        value.norm() / scale
    }
}

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let radius = (coeffs[0].norm() / coeffs[n].norm()).powf(1.0 / n as f64);
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    (0..n)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// Returns the iterates, the sweep count, and whether every correction
/// became negligible before the sweep cap.
fn aberth(coeffs: &[Complex64]) -> (Vec<Complex64>, usize, bool) {
    let mut z = initial_guesses(coeffs);
    let n = z.len();
    for sweep in 1..=MAX_SWEEPS {
        let mut converged = true;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                converged = false;
                continue;
            }
            z[i] -= step;
            if step.norm() > 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                converged = false;
            }
        }
        if converged {
            return (z, sweep, true);
        }
    }
    (z, MAX_SWEEPS, false)
}

fn companion_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    m.schur().eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
}

fn newton_polish(coeffs: &[Complex64], z: Complex64, steps: usize) -> Complex64 {
    let mut z = z;
    for _ in 0..steps {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if dp.is_zero() || p.is_zero() {
            break;
        }
        let next = z - p / dp;
        if backward_error(coeffs, next) >= backward_error(coeffs, z) {
            break;
        }
        z = next;
    }
    z
}

#[derive(Clone)]
struct ExactComplex {
    re: BigRational,
    im: BigRational,
}

impl ExactComplex {
    fn from_f64(z: Complex64) -> Self {
        ExactComplex { re: rational_from_f64(z.re), im: rational_from_f64(z.im) }
    }

    fn mul(&self, o: &Self) -> Self {
        ExactComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn add_real(&self, c: &BigRational) -> Self {
        ExactComplex { re: &self.re + c, im: self.im.clone() }
    }

    fn add(&self, o: &Self) -> Self {
        ExactComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn div(&self, o: &Self) -> Option<Self> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        Some(ExactComplex {
            re: (&self.re * &o.re + &self.im * &o.im) / &den,
            im: (&self.im * &o.re - &self.re * &o.im) / &den,
        })
    }

    fn to_f64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// Newton steps with exact evaluation of `p` and `p'` at the rounded iterate.
fn exact_newton_polish(coeffs: &[BigRational], z: Complex64, steps: usize) -> Complex64 {
    let mut z = z;
    for _ in 0..steps {
        let x = ExactComplex::from_f64(z);
        let zero = ExactComplex { re: BigRational::zero(), im: BigRational::zero() };
        let mut p = zero.clone();
        let mut dp = zero;
        for c in coeffs.iter().rev() {
            dp = dp.mul(&x).add(&p);
            p = p.mul(&x).add_real(c);
        }
        let Some(step) = p.div(&dp) else { break };
        let step = step.to_f64();
        if !(step.norm() <= 1e-3 * z.norm().max(1.0)) {
            break;
        }
        let next = z - step;
        if next == z {
            break;
        }
        z = next;
    }
    z
}

/// Pair roots of a real polynomial with their conjugates and snap
/// self-paired roots onto the real axis.
fn conjugate_close(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            candidates.push(((roots[i] - roots[j].conj()).norm(), i, j));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut used = vec![false; n];
    for (_, i, j) in candidates {
        if used[i] || used[j] {
            continue;
        }
        if i == j {
            roots[i].im = 0.0;
            used[i] = true;
        } else {
            let mid = (roots[i] + roots[j].conj()) * 0.5;
            roots[i] = mid;
            roots[j] = mid.conj();
            used[i] = true;
            used[j] = true;
        }
    }
}

/// All complex roots of `p` with multiplicity.
pub fn find_roots<T: Scalar>(p: &Poly<T>, tol: f64) -> Result<RootSet> {
    if p.degree() == 0 {
        return Err(Error::Validation("root finding needs degree >= 1".into()));
    }
    let full: Vec<Complex64> = p.coeffs().iter().map(Scalar::to_complex).collect();
    if full.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Validation("non-finite coefficient".into()));
    }
    let zeros_at_origin = full.iter().take_while(|c| c.is_zero()).count();
    let coeffs = &full[zeros_at_origin..];
    let exact: Option<Vec<BigRational>> = p.coeffs()[zeros_at_origin..].iter().map(Scalar::to_rational).collect();

    let mut roots = vec![Complex64::zero(); zeros_at_origin];
    let mut method = RootMethod::Aberth;
    let mut sweeps = 0;
    if coeffs.len() == 2 {
        roots.push(-coeffs[0] / coeffs[1]);
    } else if coeffs.len() > 2 {
        let (found, used, converged) = aberth(coeffs);
        sweeps = used;
        let ok = converged && found.iter().all(|&z| backward_error(coeffs, z) <= tol);
        let found = if ok {
            found
        } else {
            method = RootMethod::Companion;
            companion_roots(coeffs).into_iter().map(|z| newton_polish(coeffs, z, 8)).collect()
        };
        roots.extend(found);
    }

    if let Some(exact) = &exact {
        for z in roots.iter_mut().skip(zeros_at_origin) {
            *z = exact_newton_polish(exact, *z, 3);
        }
    }
    if T::KIND != ScalarKind::Complex {
        conjugate_close(&mut roots);
    }
    roots.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));

    let residuals: Vec<f64> = roots.iter().map(|&z| backward_error(&full, z)).collect();
    let expected = p.degree();
    if roots.len() != expected {
        return Err(Error::NoConvergence(format!("found {} of {expected} roots", roots.len())));
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::NoConvergence(format!(
            "largest residual {worst:.3e} exceeds tolerance {tol:.1e} after {sweeps} Aberth sweeps and companion fallback"
        )));
    }
    Ok(RootSet { roots, residuals, method, sweeps })
}

/// Monic polynomial with the given roots; used by tests and diagnostics.
pub fn poly_from_roots(roots: &[Complex64]) -> Poly<Complex64> {
    roots.iter().fold(Poly::constant(Complex64::new(1.0, 0.0)), |acc, r| {
        &acc * &Poly::new(vec![-r, Complex64::new(1.0, 0.0)])
    })
}
