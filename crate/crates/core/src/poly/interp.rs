use super::{Poly, Scalar};
use crate::error::{Error, Result};

/// Interpolating polynomial of degree at most `expected_degree` through the
/// first `expected_degree + 1` points, via divided differences.
pub fn newton_interpolate<T: Scalar>(points: &[(T, T)], expected_degree: usize) -> Result<Poly<T>> {
    let n = expected_degree + 1;
    if points.len() < n {
        return Err(Error::Validation(format!(
            "degree {expected_degree} interpolation needs {n} points, got {}",
            points.len()
        )));
    }
    let nodes: Vec<T> = points[..n].iter().map(|(x, _)| x.clone()).collect();
    for i in 0..n {
        for j in 0..i {
            if (nodes[i].clone() - nodes[j].clone()).is_zero() {
                return Err(Error::DuplicateNode(i));
            }
        }
    }

    // In-place divided differences: dd[i] ends up as f[x_0, ..., x_i].
    let mut dd: Vec<T> = points[..n].iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (nodes[i].clone() - nodes[i - level].clone());
        }
    }

    // Horner on the Newton form: p = dd0 + (z - x0)(dd1 + (z - x1)(...)).
    let mut acc = Poly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let factor = Poly::new(vec![-nodes[i].clone(), T::one()]);
        acc = &(&acc * &factor) + &Poly::constant(dd[i].clone());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalPoly;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn constant_through_two_points() {
        let p = newton_interpolate(&[(q(0, 1), q(1, 1)), (q(1, 1), q(1, 1))], 1).unwrap();
        assert_eq!(p, RationalPoly::constant(q(1, 1)));
    }

    #[test]
    fn duplicate_node_is_rejected() {
        let err = newton_interpolate(&[(2.0, 1.0), (2.0, 3.0)], 1).unwrap_err();
        assert!(matches!(err, Error::DuplicateNode(1)));
    }

    #[test]
    fn ehrhart_values_of_tetrahedron() {
        let pts: Vec<_> = [1, 5, 15, 35]
            .iter()
            .enumerate()
            .map(|(n, &v)| (q(n as i64, 1), q(v, 1)))
            .collect();
        let p = newton_interpolate(&pts, 3).unwrap();
        assert_eq!(p.coeffs(), &[q(1, 1), q(7, 3), q(1, 1), q(2, 3)]);
    }

    proptest! {
        #[test]
        fn recovers_random_rational_poly(
            nums in proptest::collection::vec(-50i64..50, 7),
            dens in proptest::collection::vec(1i64..20, 7),
            offset in -5i64..5,
        ) {
            let p = RationalPoly::new(nums.iter().zip(&dens).map(|(&a, &b)| q(a, b)).collect());
            let pts: Vec<_> = (0..7).map(|i| {
                let x = q(2 * i + offset, 3);
                (x.clone(), p.eval(&x))
            }).collect();
            let back = newton_interpolate(&pts, 6).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
