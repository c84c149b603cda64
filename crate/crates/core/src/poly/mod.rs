//! Dense univariate polynomials over exact rationals, reals and complex numbers.
//!
//! Coefficients are stored lowest degree first: `coeffs[i]` multiplies `z^i`.
//! Exact polynomials are always trimmed of zero leading coefficients; inexact
//! ones only lose exactly-zero leading terms unless [`Poly::normalized`] is
//! asked to apply a relative threshold.

mod interp;
mod roots;
mod scalar;
mod series;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

pub use interp::newton_interpolate;
pub use roots::{find_roots, poly_from_roots, RootMethod, RootSet, DEFAULT_ROOT_TOL};
pub use scalar::{parse_rational, rational_from_f64, rational_string, rational_to_f64, Scalar, ScalarKind};
pub use series::series_coeffs_of_ratio;

pub type RationalPoly = Poly<BigRational>;
pub type RealPoly = Poly<f64>;
pub type ComplexPoly = Poly<Complex64>;

/// Leading coefficients below this fraction of the largest coefficient are
/// treated as numerical zeros by [`Poly::normalized`].
pub const DEFAULT_TRUNCATION: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct Poly<T: Scalar> {
    coeffs: Vec<T>,
}

/// Result of dropping numerically-zero leading coefficients.
#[derive(Debug, Clone)]
pub struct Normalized<T: Scalar> {
    pub poly: Poly<T>,
    /// Dropped coefficients, highest degree first.
    pub dropped: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `z`
    pub fn identity() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    /// `c * z^n`
    pub fn monomial(c: T, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `z^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn kind(&self) -> ScalarKind {
        T::KIND
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Drop leading coefficients whose magnitude is below
    /// `rel_threshold * max|coeff|`. Exact polynomials are returned as is.
    pub fn normalized(&self, rel_threshold: f64) -> Normalized<T> {
        let mut coeffs = self.coeffs.clone();
        let mut dropped = Vec::new();
        if !T::is_exact() {
            let cutoff = rel_threshold * self.max_abs_coeff();
            while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.magnitude() < cutoff) {
                dropped.push(coeffs.pop().unwrap());
            }
        }
        Normalized { poly: Poly::new(coeffs), dropped }
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c.to_complex())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| T::from_i64(i as i64) * c.clone())
            .collect();
        Poly::new(coeffs)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `p(-s)`
    pub fn reflect_sign(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        Poly::new(coeffs)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c.clone() / lead.clone()).collect())
    }

    /// Synthetic division by `(1 - z)`: returns `(q, r)` with `p = (1 - z) q + r`.
    pub fn div_one_minus_z(&self) -> (Self, T) {
        if self.coeffs.is_empty() {
            return (Poly::zero(), T::zero());
        }
        // p = (z - 1)(-q) + r, so run Horner division by (z - 1) and negate.
        let n = self.coeffs.len();
        let mut quotient = vec![T::zero(); n - 1];
        let mut carry = T::zero();
        for i in (0..n).rev() {
            carry = carry + self.coeffs[i].clone();
            if i > 0 {
                quotient[i - 1] = carry.clone();
            }
        }
        let q = Poly::new(quotient.into_iter().map(|c| -c).collect());
        (q, carry)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_complex(&self) -> ComplexPoly {
        self.map(Scalar::to_complex)
    }
}

impl RationalPoly {
    pub fn to_f64(&self) -> RealPoly {
        self.map(rational_to_f64)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }
}

impl RealPoly {
    /// Exact rational lift of every coefficient.
    pub fn to_rational(&self) -> RationalPoly {
        self.map(|c| rational_from_f64(*c))
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poly").field("kind", &T::KIND).field("coeffs", &self.coeffs).finish()
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Relative residual of the functional equation `p(s) = eps * p(1 - s)`,
/// sampled on an 8x8 grid over `[-2, 3] x [-2, 2]` and normalised by the
/// largest `|p|` seen on the grid.
pub fn poly_reflect_functional<T: Scalar>(p: &Poly<T>, eps: i32) -> f64 {
    const SIDE: usize = 8;
    let eps = eps as f64;
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for a in 0..SIDE {
        for b in 0..SIDE {
            let re = -2.0 + 5.0 * a as f64 / (SIDE - 1) as f64;
            let im = -2.0 + 4.0 * b as f64 / (SIDE - 1) as f64;
            let s = Complex64::new(re, im);
            let v = p.eval_complex(s);
            let w = p.eval_complex(Complex64::new(1.0, 0.0) - s);
            worst = worst.max((v - w * eps).norm());
            scale = scale.max(v.norm());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = RealPoly::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert!(RealPoly::new(vec![0.0]).is_zero());
    }

    #[test]
    fn threshold_normalization_records_drop() {
        let p = RealPoly::new(vec![1.0, -2.0, 1e-14]);
        let n = p.normalized(DEFAULT_TRUNCATION);
        assert_eq!(n.poly.degree(), 1);
        assert_eq!(n.dropped, vec![1e-14]);
        let exact = RationalPoly::new(vec![q(1, 1), q(1, 10_i64.pow(15))]);
        assert_eq!(exact.normalized(DEFAULT_TRUNCATION).poly.degree(), 1);
    }

    #[test]
    fn division_by_one_minus_z() {
        // z^2 - 1 = (1 - z)(-1 - z)
        let p = RealPoly::new(vec![-1.0, 0.0, 1.0]);
        let (quot, rem) = p.div_one_minus_z();
        assert_eq!(quot.coeffs(), &[-1.0, -1.0]);
        assert_eq!(rem, 0.0);
        let p = RationalPoly::new(vec![q(3, 1), q(1, 2), q(1, 1)]);
        let (quot, rem) = p.div_one_minus_z();
        let one_minus_z = RationalPoly::new(vec![q(1, 1), q(-1, 1)]);
        let back = &(&one_minus_z * &quot) + &RationalPoly::constant(rem.clone());
        assert_eq!(back, p);
        assert_eq!(rem, q(9, 2));
    }

    #[test]
    fn reflect_functional_examples() {
        let p = RealPoly::new(vec![1.0, -1.0, 1.0]);
        assert!(poly_reflect_functional(&p, 1) < 1e-15);
        let p = RealPoly::new(vec![-1.0, 2.0]);
        assert!(poly_reflect_functional(&p, -1) < 1e-15);
        assert!(poly_reflect_functional(&p, 1) > 0.1);
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = RationalPoly::new(vec![q(1, 1), q(1, 1)]);
        let b = RationalPoly::new(vec![q(-1, 1), q(1, 1)]);
        let prod = &a * &b;
        assert_eq!(prod.coeffs(), &[q(-1, 1), q(0, 1), q(1, 1)]);
        assert_eq!(prod.eval(&q(3, 1)), q(8, 1));
        assert_eq!(prod.derivative().coeffs(), &[q(0, 1), q(2, 1)]);
        assert_eq!(a.reflect_sign().coeffs(), &[q(1, 1), q(-1, 1)]);
    }
}
