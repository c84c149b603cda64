//! The limiting polynomials `H_k^±`, the cotangent-sum description of their
//! zeros, lattice points of the cross-simplex and root convergence across a
//! family of newforms.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial_poly_with, StirlingTable};
use crate::error::{Error, Result};
use crate::lvalues::{all_critical_values, default_target_err};
use crate::newform::{detect_sign, NewformData, Sign};
use crate::poly::{find_roots, RationalPoly, RootSet, DEFAULT_ROOT_TOL};
use crate::zeta::{exact_weighted_moments, verify, zeta_direct};

/// Point budget for [`ehrhart_count`].
pub const EHRHART_BUDGET: u128 = 500_000_000;
pub const HK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HPolyPair {
    pub k: u32,
    pub h_plus: RationalPoly,
    pub h_minus: RationalPoly,
}

impl HPolyPair {
    pub fn get(&self, sign: Sign) -> &RationalPoly {
        match sign {
            Sign::Plus => &self.h_plus,
            Sign::Minus => &self.h_minus,
        }
    }

    /// `H_k^±(-s)`, the limit shape of `Z_f(s)`.
    pub fn zeta_shape(&self, sign: Sign) -> RationalPoly {
        self.get(sign).reflect_sign()
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `H_k^+(s) = C(s+k-2, k-2) + C(s, k-2)` and
/// `H_k^-(s) = sum_{j=0}^{k-3} C(s-j+k-3, k-3)`. Accepts even `k >= 4`.
pub fn build_h_polys(k: u32) -> Result<HPolyPair> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Validation(format!("weight must be even and >= 4, got {k}")));
    }
    let d = k as usize - 2;
    let table = StirlingTable::new(d);
    let h_plus = &binomial_poly_with(&table, &int(d as i64), d) + &binomial_poly_with(&table, &BigRational::zero(), d);
    let h_minus = (0..=d as i64 - 1).fold(RationalPoly::zero(), |acc, j| {
        &acc + &binomial_poly_with(&table, &int(d as i64 - 1 - j), d - 1)
    });
    Ok(HPolyPair { k, h_plus, h_minus })
}

/// `h_k(t) = sum_{j=0}^{k-3} arccot(2t / (2j+1))` with `arccot` valued in
/// `(0, π)`, strictly decreasing on the real line.
pub fn h_k(k: u32, t: f64) -> f64 {
    (0..=k as i64 - 3)
        .map(|j| PI / 2.0 - (2.0 * t / (2 * j + 1) as f64).atan())
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct CotSolverResult {
    pub k: u32,
    pub sign: Sign,
    pub targets: Vec<f64>,
    /// `heights[i]` solves `h_k(t) = targets[i]`; decreasing.
    pub heights: Vec<f64>,
}

impl CotSolverResult {
    /// Zeros `1/2 + i t` of `H_k^∓(-s)`, sorted by imaginary part.
    pub fn zeros(&self) -> Vec<Complex64> {
        let mut z: Vec<Complex64> = self.heights.iter().map(|&t| Complex64::new(0.5, t)).collect();
        z.sort_by(|a, b| a.im.total_cmp(&b.im));
        z
    }

    pub fn max_height(&self) -> f64 {
        self.heights.iter().map(|t| t.abs()).fold(0.0, f64::max)
    }
}

/// Target set: `{π, ..., (k-3)π}` for the zeros of `H_k^-(-s)` and
/// `{π/2, ..., (k-5/2)π}` for those of `H_k^+(-s)`.
pub fn hk_targets(k: u32, sign: Sign) -> Vec<f64> {
    match sign {
        Sign::Minus => (1..=k - 3).map(|j| j as f64 * PI).collect(),
        Sign::Plus => (0..=k - 3).map(|j| (j as f64 + 0.5) * PI).collect(),
    }
}

/// Solve `h_k(t) = target` for each target by bisection on `(0, k^2]`.
/// Targets above `h_k(0) = (k-2)π/2` are solved through
/// `h_k(-t) = (k-2)π - h_k(t)` and give negative heights.
pub fn solve_hk_zeros(k: u32, sign: Sign) -> Result<CotSolverResult> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Validation(format!("weight must be even and >= 4, got {k}")));
    }
    let targets = hk_targets(k, sign);
    let total = (k - 2) as f64 * PI;
    let t_hi = (k * k) as f64;
    let heights = targets
        .iter()
        .map(|&target| {
            let (goal, mirror) = if target > total / 2.0 { (total - target, -1.0) } else { (target, 1.0) };
            if goal <= 0.0 || h_k(k, t_hi) >= goal {
                return Err(Error::BracketFailure { k, target });
            }
            let (mut lo, mut hi) = (0.0_f64, t_hi);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if h_k(k, mid) > goal {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            if (h_k(k, t) - goal).abs() >= HK_TOLERANCE {
                return Err(Error::NoConvergence(format!("h_{k}(t) = {goal} stalled at t = {t}")));
            }
            Ok(mirror * t)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CotSolverResult { k, sign, targets, heights })
}

/// Facet description of `m * conv{e_1, ..., e_d, -(e_1 + ... + e_d)}`:
/// `sum x <= m` and `(d+1) x_i + m - sum x >= 0` for every `i`.
pub fn in_cross_simplex(point: &[i64], m: i64) -> bool {
    let d = point.len() as i64;
    let sum: i64 = point.iter().sum();
    sum <= m && point.iter().all(|&x| (d + 1) * x + m - sum >= 0)
}

/// Lattice points of the `m`-th dilate of the cross-simplex in dimension
/// `k - 3`, by enumeration of the box `[-m, m]^{k-3}`.
pub fn ehrhart_count(k: u32, m: u32) -> Result<u64> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Validation(format!("weight must be even and >= 4, got {k}")));
    }
    let d = k as usize - 3;
    let side = 2 * m as u128 + 1;
    let size = side.checked_pow(d as u32).unwrap_or(u128::MAX);
    if size > EHRHART_BUDGET {
        return Err(Error::TooLarge(size));
    }
    let m = m as i64;
    let count = (-m..=m)
        .into_par_iter()
        .map(|first| {
            let mut point = vec![-m; d];
            point[0] = first;
            let mut count = 0u64;
            loop {
                if in_cross_simplex(&point, m) {
                    count += 1;
                }
                // odometer over coordinates 1..d
                let mut i = 1;
                while i < d {
                    if point[i] < m {
                        point[i] += 1;
                        break;
                    }
                    point[i] = -m;
                    i += 1;
                }
                if i >= d {
                    break;
                }
            }
            count
        })
        .sum();
    Ok(count)
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials); `result[i]` is the column assigned to row `i`.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut result = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            result[p[j] - 1] = j - 1;
        }
    }
    result
}

/// Largest pair distance under the minimum-total-distance matching of two
/// root multisets of equal size.
pub fn root_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Validation(format!("root multisets differ in size: {} vs {}", a.len(), b.len())));
    }
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let assign = min_cost_assignment(&cost);
    Ok(assign.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub label: String,
    pub level: u64,
    pub distance: f64,
    pub roots: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub weight: u32,
    pub sign: Sign,
    pub limit_roots: Vec<Complex64>,
    /// Sorted by level.
    pub rows: Vec<ConvergenceRow>,
    /// Kendall tau between level and distance; negative means shrinking.
    pub kendall_tau: f64,
    pub last_below_first: bool,
}

fn kendall_tau(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += ((xs[j] - xs[i]) * (ys[j] - ys[i])).signum();
        }
    }
    s / (n * (n - 1) / 2) as f64
}

/// Distance of each member's `Z_f` roots from the roots of `H_k^±(-s)`.
/// Every member must share weight and sign and pass verification.
pub fn convergence_study(family: &[NewformData]) -> Result<ConvergenceTable> {
    let first = family.first().ok_or_else(|| Error::Validation("empty family".into()))?;
    let k = first.weight;
    let sign_of = |d: &NewformData| -> Result<Sign> { detect_sign(d, default_target_err(d)) };
    let sign = sign_of(first)?;
    let limit = if k == 4 {
        // Z_f tends to a multiple of s^2 - s + 1
        match sign {
            Sign::Plus => RationalPoly::new(vec![int(1), int(-1), int(1)]),
            Sign::Minus => RationalPoly::new(vec![int(-1), int(2)]),
        }
    } else {
        build_h_polys(k)?.zeta_shape(sign)
    };
    let limit_roots = find_roots(&limit, DEFAULT_ROOT_TOL)?.roots;
    let stirling = StirlingTable::new(k as usize - 2);
    let mut rows = family
        .par_iter()
        .map(|data| -> Result<ConvergenceRow> {
            if data.weight != k {
                return Err(Error::Validation(format!("{} has weight {} != {k}", data.label, data.weight)));
            }
            let s = sign_of(data)?;
            if s != sign {
                return Err(Error::Validation(format!("{} has the wrong sign", data.label)));
            }
            let lv = all_critical_values(data, default_target_err(data))?;
            let moments = exact_weighted_moments(&lv, k)?;
            let z = zeta_direct(&moments, k, sign, &stirling, &data.label)?;
            let report = verify(&z, None);
            if !report.passed {
                return Err(Error::Validation(format!("{} fails verification", data.label)));
            }
            let roots: RootSet = report.roots.expect("verified polynomial has roots");
            Ok(ConvergenceRow {
                label: data.label.clone(),
                level: data.level,
                distance: root_distance(&roots.roots, &limit_roots)?,
                roots: roots.roots,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.level.cmp(&b.level).then(a.label.cmp(&b.label)));
    let levels: Vec<f64> = rows.iter().map(|r| r.level as f64).collect();
    let dists: Vec<f64> = rows.iter().map(|r| r.distance).collect();
    let last_below_first = rows.len() > 1 && dists[dists.len() - 1] < dists[0];
    Ok(ConvergenceTable {
        weight: k,
        sign,
        limit_roots,
        kendall_tau: kendall_tau(&levels, &dists),
        last_below_first,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::series_coeffs_of_ratio;
    use crate::zeta::rv_transform;
    use nalgebra::{DMatrix, DVector};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn h6_minus_closed_form() {
        let h = build_h_polys(6).unwrap();
        assert_eq!(h.h_minus.coeffs(), &[q(1, 1), q(7, 3), q(1, 1), q(2, 3)]);
        assert_eq!(h.h_plus.degree(), 4);
        assert_eq!(h.h_minus.eval(&q(0, 1)), q(1, 1));
        assert!(build_h_polys(5).is_err());
    }

    #[test]
    fn h_minus_matches_series_oracle() {
        let h = build_h_polys(8).unwrap();
        let u = RationalPoly::new(vec![q(1, 1); 6]);
        let series = series_coeffs_of_ratio(&u, 6, 11);
        for (n, c) in series.iter().enumerate() {
            assert_eq!(&h.h_minus.eval(&q(n as i64, 1)), c);
        }
    }

    #[test]
    fn h_polys_are_rv_transforms() {
        for k in [6u32, 8, 10, 12] {
            let h = build_h_polys(k).unwrap();
            let d = k as usize - 2;
            let geo = RationalPoly::new(vec![q(1, 1); d]);
            assert_eq!(rv_transform(&geo).unwrap(), h.zeta_shape(Sign::Minus));
            let mut plus = vec![q(0, 1); d + 1];
            plus[0] = q(1, 1);
            plus[d] = q(1, 1);
            assert_eq!(rv_transform(&RationalPoly::new(plus)).unwrap(), h.zeta_shape(Sign::Plus));
        }
    }

    #[test]
    fn h_k_strictly_decreasing() {
        for k in [6u32, 12, 20] {
            let mut prev = h_k(k, -50.0);
            for i in 1..2000 {
                let t = -50.0 + i as f64 * 0.05;
                let v = h_k(k, t);
                assert!(v < prev, "k={k} t={t}");
                prev = v;
            }
            assert!((h_k(k, 0.0) - (k - 2) as f64 * PI / 2.0).abs() < 1e-12);
            assert!((h_k(k, -1.3) - ((k - 2) as f64 * PI - h_k(k, 1.3))).abs() < 1e-12);
        }
    }

    #[test]
    fn cot_solver_matches_root_finder() {
        for k in [6u32, 8, 10, 12] {
            let h = build_h_polys(k).unwrap();
            for sign in [Sign::Plus, Sign::Minus] {
                // zeros of H^∓(-s) come from the ∓ target set
                let solved = solve_hk_zeros(k, sign).unwrap();
                let roots = find_roots(&h.zeta_shape(sign), DEFAULT_ROOT_TOL).unwrap();
                let d = root_distance(&solved.zeros(), &roots.roots).unwrap();
                assert!(d < 1e-9, "k={k} {sign:?}: {d}");
                assert!(solved.heights.windows(2).all(|w| w[1] < w[0]));
            }
        }
    }

    #[test]
    fn h6_minus_top_height() {
        let s = solve_hk_zeros(6, Sign::Minus).unwrap();
        assert!((s.max_height() - 11f64.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn small_ehrhart_counts() {
        assert_eq!(ehrhart_count(6, 0).unwrap(), 1);
        assert_eq!(ehrhart_count(6, 1).unwrap(), 5);
        let h = build_h_polys(6).unwrap();
        for m in 0..=5 {
            assert_eq!(BigRational::from_integer(ehrhart_count(6, m).unwrap().into()), h.h_minus.eval(&q(m as i64, 1)));
        }
        assert!(matches!(ehrhart_count(40, 8), Err(Error::TooLarge(_))));
    }

    // barycentric membership: p = sum λ_i v_i with λ >= 0, sum λ = m
    fn hull_contains(point: &[i64], m: i64) -> bool {
        let d = point.len();
        let mut a = DMatrix::<f64>::zeros(d + 1, d + 1);
        for i in 0..d {
            a[(i, i)] = 1.0;
            a[(i, d)] = -1.0;
        }
        for j in 0..=d {
            a[(d, j)] = 1.0;
        }
        let mut b = DVector::<f64>::zeros(d + 1);
        for i in 0..d {
            b[i] = point[i] as f64;
        }
        b[d] = m as f64;
        let lambda = a.lu().solve(&b).unwrap();
        lambda.iter().all(|&l| l >= -1e-9)
    }

    #[test]
    fn facets_agree_with_hull_oracle() {
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = |range: i64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % (2 * range as u64 + 1)) as i64 - range
        };
        for d in 1..=7usize {
            for _ in 0..400 {
                let m = next(3).abs() + 1;
                let p: Vec<i64> = (0..d).map(|_| next(m + 1)).collect();
                assert_eq!(in_cross_simplex(&p, m), hull_contains(&p, m), "{p:?} m={m}");
            }
        }
    }

    #[test]
    fn assignment_picks_cheapest() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        let a = min_cost_assignment(&cost);
        let total: f64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert_eq!(total, 5.0);
    }

    #[test]
    fn single_member_family() {
        let data = crate::corpus::family(6, Sign::Minus).into_iter().next().unwrap();
        let table = convergence_study(std::slice::from_ref(&data)).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert!(table.rows[0].distance.is_finite());
        assert!(table.rows[0].roots.iter().all(|r| r.im.abs() < 3.0));
    }
}
