//! Newform input data: Fourier coefficients, level, weight and sign.

use std::io::Read;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::divisor_count;
use crate::error::{Error, Result};
use crate::lvalues::sign_residual;

/// Sign of the functional equation `Λ(f, s) = ε Λ(f, k - s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.value())
    }
}

/// A Fourier coefficient, exact when integral.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Integer(BigInt),
    Real(f64),
}

impl Coefficient {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Integer(v) => v.to_f64().unwrap_or(f64::NAN),
            Coefficient::Real(v) => *v,
        }
    }

    fn is_one(&self) -> bool {
        match self {
            Coefficient::Integer(v) => v.is_one(),
            Coefficient::Real(v) => *v == 1.0,
        }
    }

    /// `|a_n| <= d(n) n^{(k-1)/2}`, checked exactly for integers.
    fn within_deligne_bound(&self, n: u64, weight: u32) -> bool {
        let d = divisor_count(n);
        match self {
            Coefficient::Integer(v) => {
                let lhs = v * v;
                let rhs = BigInt::from(d * d) * BigInt::from(n).pow(weight - 1);
                lhs <= rhs
            }
            Coefficient::Real(v) => {
                let bound = d as f64 * (n as f64).powf((weight as f64 - 1.0) / 2.0);
                v.is_finite() && v.abs() <= bound * (1.0 + 1e-9)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewformData {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub sign: Option<Sign>,
    /// `coeffs[i]` is `a_{i+1}`.
    pub coeffs: Vec<Coefficient>,
}

impl NewformData {
    /// Validates weight, normalisation and the Deligne bound.
    pub fn new(label: impl Into<String>, level: u64, weight: u32, sign: Option<Sign>, coeffs: Vec<Coefficient>) -> Result<Self> {
        if weight < 4 || weight % 2 == 1 {
            return Err(Error::Validation(format!("weight must be even and at least 4, got {weight}")));
        }
        if level == 0 {
            return Err(Error::Validation("level must be positive".into()));
        }
        match coeffs.first() {
            None => return Err(Error::Validation("no coefficients".into())),
            Some(a1) if !a1.is_one() => {
                return Err(Error::Validation(format!("a_1 must be 1, got {}", a1.to_f64())));
            }
            _ => {}
        }
        for (i, a) in coeffs.iter().enumerate() {
            let n = i as u64 + 1;
            if !a.within_deligne_bound(n, weight) {
                return Err(Error::Validation(format!("a_{n} = {} violates the Deligne bound", a.to_f64())));
            }
        }
        Ok(NewformData { label: label.into(), level, weight, sign, coeffs })
    }

    /// The discriminant function `Δ` of weight 12 and level 1.
    pub fn delta(count: usize) -> Self {
        let coeffs = delta_coefficients(count).into_iter().map(Coefficient::Integer).collect();
        NewformData { label: "delta".into(), level: 1, weight: 12, sign: Some(Sign::Plus), coeffs }
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Coefficient::to_f64).collect()
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = Some(sign);
        self
    }

    pub fn to_json(&self) -> String {
        let an = self
            .coeffs
            .iter()
            .map(|c| match c {
                Coefficient::Integer(v) => match v.to_i64() {
                    Some(i) => serde_json::Value::from(i),
                    None => serde_json::Value::from(v.to_f64().unwrap_or(f64::NAN)),
                },
                Coefficient::Real(v) => serde_json::Value::from(*v),
            })
            .collect();
        let doc = NewformJson {
            label: self.label.clone(),
            level: self.level,
            weight: self.weight,
            sign: self.sign.map(Sign::value),
            an,
        };
        serde_json::to_string(&doc).expect("newform serialises")
    }
}

#[derive(Serialize, Deserialize)]
struct NewformJson {
    label: String,
    level: u64,
    weight: u32,
    sign: Option<i32>,
    an: Vec<serde_json::Value>,
}

/// Metadata for CSV input, which only carries the `n,an` table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvHeader {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub sign: Option<Sign>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputFormat {
    Json,
    Csv(CsvHeader),
}

fn parse_sign(v: Option<i64>) -> Result<Option<Sign>> {
    match v {
        None => Ok(None),
        Some(s) => Sign::from_i64(s)
            .map(Some)
            .ok_or_else(|| Error::Validation(format!("sign must be 1, -1 or null, got {s}"))),
    }
}

fn coefficient_from_json(v: &serde_json::Value, n: usize) -> Result<Coefficient> {
    match v {
        serde_json::Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(Coefficient::Integer(BigInt::from(i)))
            } else if let Some(u) = num.as_u64() {
                Ok(Coefficient::Integer(BigInt::from(u)))
            } else {
                Ok(Coefficient::Real(num.as_f64().unwrap_or(f64::NAN)))
            }
        }
        _ => Err(Error::Parse(format!("a_{n} is not a number"))),
    }
}

fn coefficient_from_str(s: &str, n: usize) -> Result<Coefficient> {
    let s = s.trim();
    if let Ok(i) = s.parse::<BigInt>() {
        return Ok(Coefficient::Integer(i));
    }
    s.parse::<f64>()
        .map(Coefficient::Real)
        .map_err(|_| Error::Parse(format!("a_{n} = {s:?} is not a number")))
}

pub fn load_newform_json(text: &str) -> Result<NewformData> {
    let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let sign = match raw.get("sign") {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => Some(v.as_i64().ok_or_else(|| Error::Parse("sign must be an integer or null".into()))?),
    };
    let doc: NewformJson = serde_json::from_value(raw).map_err(|e| Error::Parse(e.to_string()))?;
    let coeffs = doc
        .an
        .iter()
        .enumerate()
        .map(|(i, v)| coefficient_from_json(v, i + 1))
        .collect::<Result<Vec<_>>>()?;
    NewformData::new(doc.label, doc.level, doc.weight, parse_sign(sign)?, coeffs)
}

pub fn load_newform_csv<R: Read>(source: R, header: &CsvHeader) -> Result<NewformData> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let columns = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if columns.len() != 2 || &columns[0] != "n" || &columns[1] != "an" {
        return Err(Error::Parse(format!("expected header `n,an`, got `{}`", columns.iter().collect::<Vec<_>>().join(","))));
    }
    let mut coeffs = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let n: usize = record[0]
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad index {:?}", row + 1, &record[0])))?;
        if n != row + 1 {
            return Err(Error::Parse(format!("row {}: expected n = {}, got {n}", row + 1, row + 1)));
        }
        coeffs.push(coefficient_from_str(&record[1], n)?);
    }
    NewformData::new(header.label.clone(), header.level, header.weight, header.sign, coeffs)
}

pub fn load_newform<R: Read>(mut source: R, format: &InputFormat) -> Result<NewformData> {
    match format {
        InputFormat::Json => {
            let mut text = String::new();
            source.read_to_string(&mut text)?;
            load_newform_json(&text)
        }
        InputFormat::Csv(header) => load_newform_csv(source, header),
    }
}

/// `τ(1), ..., τ(count)`: coefficients of `q prod_{n>=1} (1 - q^n)^24`.
pub fn delta_coefficients(count: usize) -> Vec<BigInt> {
    assert!(count >= 1, "need at least one coefficient");
    // prod (1 - q^n) = sum_j (-1)^j q^{j(3j-1)/2}, j over all integers
    let mut eta = vec![BigInt::zero(); count];
    eta[0] = BigInt::one();
    for j in 1.. {
        let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let a = j * (3 * j - 1) / 2;
        let b = j * (3 * j + 1) / 2;
        if a >= count {
            break;
        }
        eta[a] += &sign;
        if b < count {
            eta[b] += &sign;
        }
    }
    let mut result = vec![BigInt::zero(); count];
    result[0] = BigInt::one();
    let mut base = eta;
    let mut e = 24u32;
    while e > 0 {
        if e & 1 == 1 {
            result = truncated_mul(&result, &base, count);
        }
        e >>= 1;
        if e > 0 {
            base = truncated_mul(&base, &base, count);
        }
    }
    result
}

fn truncated_mul(a: &[BigInt], b: &[BigInt], count: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); count];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(count - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Relative tolerance on the functional-equation residual when inferring the sign.
pub const SIGN_TOLERANCE: f64 = 1e-6;

/// Infer `ε(f)` as the choice that makes an asymmetrically split two-tail
/// evaluation satisfy the functional equation. If the data already carries
/// a sign it must agree.
pub fn detect_sign(data: &NewformData, target_err: f64) -> Result<Sign> {
    let plus = sign_residual(data, Sign::Plus, target_err)?;
    let minus = sign_residual(data, Sign::Minus, target_err)?;
    let detected = match (plus < SIGN_TOLERANCE, minus < SIGN_TOLERANCE) {
        (true, false) => Sign::Plus,
        (false, true) => Sign::Minus,
        _ => return Err(Error::AmbiguousSign { plus, minus }),
    };
    if let Some(given) = data.sign {
        if given != detected {
            return Err(Error::Validation(format!(
                "declared sign {} disagrees with the detected sign {}",
                given.value(),
                detected.value()
            )));
        }
    }
    Ok(detected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lvalues::default_target_err;
    use num_integer::Integer;

    #[test]
    fn delta_first_terms() {
        assert_eq!(delta_coefficients(1), vec![BigInt::one()]);
        assert_eq!(delta_coefficients(2), vec![BigInt::one(), BigInt::from(-24)]);
        let t = delta_coefficients(10);
        let want = [1i64, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
        assert_eq!(t, want.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        assert_eq!(&t[5], &(&t[1] * &t[2]));
    }

    #[test]
    fn delta_independent_series_oracle() {
        // Naive product of (1 - q^n) 24 times, no pentagonal shortcut.
        let count = 40;
        let mut series = vec![BigInt::zero(); count];
        series[0] = BigInt::one();
        for n in 1..count {
            for _ in 0..24 {
                for i in (n..count).rev() {
                    let prev = series[i - n].clone();
                    series[i] -= prev;
                }
            }
        }
        assert_eq!(delta_coefficients(count), series);
    }

    #[test]
    fn delta_multiplicative_and_within_bound() {
        let t = delta_coefficients(200);
        for m in 1..=200usize {
            for n in 1..=200 / m {
                if m.gcd(&n) == 1 && m * n <= 200 {
                    assert_eq!(t[m * n - 1], &t[m - 1] * &t[n - 1], "m={m} n={n}");
                }
            }
        }
        for (i, c) in t.iter().enumerate() {
            assert!(Coefficient::Integer(c.clone()).within_deligne_bound(i as u64 + 1, 12));
        }
    }

    #[test]
    fn json_ingest_and_errors() {
        let ok = r#"{"label":"11.4.a.a","level":11,"weight":4,"sign":1,"an":[1,-0.7320508075688773]}"#;
        let f = load_newform_json(ok).unwrap();
        assert_eq!((f.level, f.weight, f.sign), (11, 4, Some(Sign::Plus)));
        let odd = r#"{"label":"x","level":11,"weight":3,"sign":1,"an":[1]}"#;
        assert!(matches!(load_newform_json(odd), Err(Error::Validation(_))));
        let bad_a1 = r#"{"label":"x","level":11,"weight":4,"sign":1,"an":[2,0]}"#;
        assert!(matches!(load_newform_json(bad_a1), Err(Error::Validation(_))));
        let bound = r#"{"label":"x","level":11,"weight":4,"sign":null,"an":[1,100]}"#;
        assert!(matches!(load_newform_json(bound), Err(Error::Validation(_))));
        assert!(matches!(load_newform_json("{"), Err(Error::Parse(_))));
        let bad_sign = r#"{"label":"x","level":11,"weight":4,"sign":3,"an":[1]}"#;
        assert!(matches!(load_newform_json(bad_sign), Err(Error::Validation(_))));
        let unknown = r#"{"label":"x","level":11,"weight":4,"sign":null,"an":[1]}"#;
        assert_eq!(load_newform_json(unknown).unwrap().sign, None);
    }

    #[test]
    fn csv_ingest() {
        let header = CsvHeader { label: "delta".into(), level: 1, weight: 12, sign: Some(Sign::Plus) };
        let text = "n,an\n1,1\n2,-24\n3,252\n";
        let f = load_newform(text.as_bytes(), &InputFormat::Csv(header.clone())).unwrap();
        assert_eq!(f.coeffs, NewformData::delta(3).coeffs);
        let gap = "n,an\n1,1\n3,252\n";
        assert!(matches!(load_newform_csv(gap.as_bytes(), &header), Err(Error::Parse(_))));
        let wrong = "k,bn\n1,1\n";
        assert!(matches!(load_newform_csv(wrong.as_bytes(), &header), Err(Error::Parse(_))));
    }

    #[test]
    fn json_round_trip_on_corpus() {
        for f in corpus::all() {
            let again = load_newform_json(&f.to_json()).unwrap();
            assert_eq!(again, f);
        }
    }

    #[test]
    fn sign_detection() {
        let delta = NewformData::delta(60);
        assert_eq!(detect_sign(&delta, default_target_err(&delta)).unwrap(), Sign::Plus);
        for f in corpus::all() {
            let unsigned = NewformData { sign: None, ..f.clone() };
            let got = detect_sign(&unsigned, default_target_err(&f)).unwrap();
            assert_eq!(Some(got), f.sign, "{}", f.label);
        }
    }

    #[test]
    fn sign_detection_needs_enough_terms() {
        let short = NewformData::delta(2);
        assert!(detect_sign(&short, default_target_err(&short)).is_err());
    }
}
