use super::{Poly, Scalar};
use crate::combinatorics::binomial;

/// First `count` power-series coefficients of `numer(z) / (1 - z)^pole_order`.
///
/// `(1 - z)^{-d} = sum_n C(n + d - 1, d - 1) z^n`, so each output coefficient
/// is a finite convolution with those binomials; exact when `T` is.
pub fn series_coeffs_of_ratio<T: Scalar>(numer: &Poly<T>, pole_order: usize, count: usize) -> Vec<T> {
    assert!(pole_order >= 1, "pole order must be positive");
    let weights: Vec<T> = (0..count)
        .map(|n| T::from_bigint(&binomial((n + pole_order - 1) as u64, (pole_order - 1) as i64)))
        .collect();
    (0..count)
        .map(|n| {
            numer
                .coeffs()
                .iter()
                .enumerate()
                .take(n + 1)
                .fold(T::zero(), |acc, (i, c)| acc + c.clone() * weights[n - i].clone())
        })
        .collect()
}
