//! Exact integer combinatorics: signed Stirling numbers of the first kind,
//! binomial coefficients and the falling-factorial expansion of `C(s + a, d)`.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::RationalPoly;

/// Triangle of signed Stirling numbers `s(n, m)` for `0 <= m <= n <= n_max`,
/// defined by `x(x - 1)...(x - n + 1) = sum_m s(n, m) x^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct StirlingTable {
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=n_max {
            rows.push(next_row(&rows[n - 1], n));
        }
        StirlingTable { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `s(n, m)`; zero when `m > n`. Panics if `n > n_max`.
    pub fn get(&self, n: usize, m: usize) -> BigInt {
        self.rows[n].get(m).cloned().unwrap_or_default()
    }

    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n]
    }
}

// s(n, m) = s(n-1, m-1) - (n-1) s(n-1, m)
fn next_row(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    let factor = BigInt::from(n - 1);
    (0..=n)
        .map(|m| {
            let diag = if m > 0 { prev[m - 1].clone() } else { BigInt::zero() };
            let same = prev.get(m).map(|v| v * &factor).unwrap_or_default();
            diag - same
        })
        .collect()
}

fn shared_rows() -> &'static RwLock<Arc<Vec<Vec<BigInt>>>> {
    static ROWS: OnceLock<RwLock<Arc<Vec<Vec<BigInt>>>>> = OnceLock::new();
    ROWS.get_or_init(|| RwLock::new(Arc::new(vec![vec![BigInt::one()]])))
}

/// Signed Stirling number of the first kind; rows are memoised process-wide.
pub fn stirling_first(n: usize, m: usize) -> BigInt {
    if m > n {
        return BigInt::zero();
    }
    {
        let rows = shared_rows().read().expect("stirling cache poisoned");
        if n < rows.len() {
            return rows[n][m].clone();
        }
    }
    let mut guard = shared_rows().write().expect("stirling cache poisoned");
    if n >= guard.len() {
        let mut rows = guard.as_ref().clone();
        while rows.len() <= n {
            let k = rows.len();
            let row = next_row(&rows[k - 1], k);
            rows.push(row);
        }
        *guard = Arc::new(rows);
    }
    guard[n][m].clone()
}

/// `C(a, b)`, zero outside `0 <= b <= a`.
pub fn binomial(a: u64, b: i64) -> BigInt {
    if b < 0 || b as u64 > a {
        return BigInt::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigInt::one();
    for i in 0..b {
        // acc * (a - i) is divisible by (i + 1) at every step.
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `C(s + shift, d)` as a polynomial in `s`:
/// `(s + shift)_d / d! = (1/d!) sum_m s(d, m) (s + shift)^m`.
pub fn binomial_poly(shift: &BigRational, degree: usize) -> RationalPoly {
    let table = StirlingTable::new(degree);
    binomial_poly_with(&table, shift, degree)
}

pub fn binomial_poly_with(table: &StirlingTable, shift: &BigRational, degree: usize) -> RationalPoly {
    let linear = RationalPoly::new(vec![shift.clone(), BigRational::one()]);
    let mut power = RationalPoly::constant(BigRational::one());
    let mut acc = RationalPoly::zero();
    for m in 0..=degree {
        if m > 0 {
            power = &power * &linear;
        }
        let c = table.get(degree, m);
        if !c.is_zero() {
            acc = &acc + &power.scale(&BigRational::from_integer(c));
        }
    }
    acc.scale(&BigRational::new(BigInt::one(), factorial(degree as u64)))
}

/// Number of positive divisors.
pub fn divisor_count(n: u64) -> u64 {
    let mut count = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    count
}
