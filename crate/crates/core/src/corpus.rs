//! Newform test corpus bundled with the crate.
//!
//! Coefficients and reference values `L(f, 1..k-1)` were produced with
//! PARI/GP by `scripts/gen_corpus.py`; forms with a non-rational coefficient
//! field are stored through one real embedding (label suffix `.e1`).

use crate::newform::{load_newform_json, NewformData, Sign};

const FILES: &[(&str, &str, &str)] = &[
    ("5.4.a.a", include_str!("../data/newforms/5.4.a.a.json"), include_str!("../data/newforms/5.4.a.a.ref.json")),
    ("11.4.a.a.e1", include_str!("../data/newforms/11.4.a.a.e1.json"), include_str!("../data/newforms/11.4.a.a.e1.ref.json")),
    ("13.4.a.a", include_str!("../data/newforms/13.4.a.a.json"), include_str!("../data/newforms/13.4.a.a.ref.json")),
    ("23.4.a.b.e1", include_str!("../data/newforms/23.4.a.b.e1.json"), include_str!("../data/newforms/23.4.a.b.e1.ref.json")),
    ("53.4.a.a", include_str!("../data/newforms/53.4.a.a.json"), include_str!("../data/newforms/53.4.a.a.ref.json")),
    ("67.4.a.b.e1", include_str!("../data/newforms/67.4.a.b.e1.json"), include_str!("../data/newforms/67.4.a.b.e1.ref.json")),
    ("151.4.a.b.e1", include_str!("../data/newforms/151.4.a.b.e1.json"), include_str!("../data/newforms/151.4.a.b.e1.ref.json")),
    ("311.4.a.b.e1", include_str!("../data/newforms/311.4.a.b.e1.json"), include_str!("../data/newforms/311.4.a.b.e1.ref.json")),
    ("503.4.a.a", include_str!("../data/newforms/503.4.a.a.json"), include_str!("../data/newforms/503.4.a.a.ref.json")),
    ("3.6.a.a", include_str!("../data/newforms/3.6.a.a.json"), include_str!("../data/newforms/3.6.a.a.ref.json")),
    ("44.6.a.a", include_str!("../data/newforms/44.6.a.a.json"), include_str!("../data/newforms/44.6.a.a.ref.json")),
    ("65.6.a.a", include_str!("../data/newforms/65.6.a.a.json"), include_str!("../data/newforms/65.6.a.a.ref.json")),
    ("2.8.a.a", include_str!("../data/newforms/2.8.a.a.json"), include_str!("../data/newforms/2.8.a.a.ref.json")),
    ("26.8.a.a", include_str!("../data/newforms/26.8.a.a.json"), include_str!("../data/newforms/26.8.a.a.ref.json")),
    ("6.10.a.a", include_str!("../data/newforms/6.10.a.a.json"), include_str!("../data/newforms/6.10.a.a.ref.json")),
];

#[derive(serde::Deserialize)]
struct Reference {
    lvalues: Vec<f64>,
}

/// Every bundled newform, ordered by weight then level.
pub fn all() -> Vec<NewformData> {
    FILES
        .iter()
        .map(|(label, json, _)| load_newform_json(json).unwrap_or_else(|e| panic!("corpus file {label}: {e}")))
        .collect()
}

/// Newforms paired with reference values `L(f, s)` for `s = 1..k-1`.
pub fn all_with_reference() -> Vec<(NewformData, Vec<f64>)> {
    all()
        .into_iter()
        .zip(FILES)
        .map(|(f, (label, _, reference))| {
            let r: Reference = serde_json::from_str(reference).unwrap_or_else(|e| panic!("reference {label}: {e}"));
            (f, r.lvalues)
        })
        .collect()
}

pub fn by_label(label: &str) -> Option<NewformData> {
    all().into_iter().find(|f| f.label == label)
}

/// Members of a given weight and sign, ordered by level.
pub fn family(weight: u32, sign: Sign) -> Vec<NewformData> {
    all().into_iter().filter(|f| f.weight == weight && f.sign == Some(sign)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads_and_is_sorted() {
        let forms = all();
        assert_eq!(forms.len(), FILES.len());
        for pair in forms.windows(2) {
            assert!((pair[0].weight, pair[0].level) <= (pair[1].weight, pair[1].level));
        }
        assert!(family(4, Sign::Plus).len() >= 5);
        assert!(!family(4, Sign::Minus).is_empty());
        assert!(!family(6, Sign::Minus).is_empty());
    }
}
