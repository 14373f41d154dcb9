//! Line-oriented text form `coeff_re coeff_im power z_re z_im`, one term per
//! line, and a JSON form `{"terms": [{"coeff", "power", "width"}]}`. Both read
//! back to the identical vector.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GaussTerm, GaussVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn write_text<S: Scalar>(v: &GaussVector<S>) -> String {
    let mut out = String::new();
    for t in v.terms() {
        let (cr, ci) = t.coeff.to_parts();
        let (zr, zi) = t.width.to_parts();
        out.push_str(&format!("{cr} {ci} {} {zr} {zi}\n", t.power));
    }
    out
}

/// Blank lines and lines starting with `#` are skipped.
pub fn read_text<S: Scalar>(text: &str) -> Result<GaussVector<S>> {
    let mut terms = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 5 {
            return Err(Error::Parse(format!("line {}: expected 5 fields, found {}", lineno + 1, f.len())));
        }
        let power =
            f[2].parse::<u32>().map_err(|_| Error::Parse(format!("line {}: bad power {:?}", lineno + 1, f[2])))?;
        let coeff = S::from_parts(f[0], f[1])?;
        let width = S::from_parts(f[3], f[4])?;
        terms.push(GaussTerm::new(coeff, power, width)?);
    }
    GaussVector::from_terms(terms)
}

#[derive(Serialize, Deserialize)]
struct TermRepr<S> {
    coeff: S,
    power: u32,
    width: S,
}

#[derive(Serialize, Deserialize)]
struct VectorRepr<S> {
    terms: Vec<TermRepr<S>>,
}

impl<S: Scalar + Serialize> Serialize for GaussVector<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let terms = self
            .terms()
            .iter()
            .map(|t| TermRepr { coeff: t.coeff.clone(), power: t.power, width: t.width.clone() })
            .collect();
        VectorRepr { terms }.serialize(s)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for GaussVector<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = VectorRepr::<S>::deserialize(d)?;
        let terms = r
            .terms
            .into_iter()
            .map(|t| GaussTerm::new(t.coeff, t.power, t.width))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        GaussVector::from_terms(terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use num_complex::Complex64;

    fn sample() -> GaussVector<ExactScalar> {
        GaussVector::from_terms(vec![
            GaussTerm::new(ExactScalar::complex_ratio((1, 3), (-7, 2)), 4, ExactScalar::complex_ratio((2, 5), (1, 9)))
                .unwrap(),
            GaussTerm::new(ExactScalar::from_int(-12), 0, ExactScalar::i()).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn text_round_trip_exact() {
        let v = sample();
        let txt = write_text(&v);
        assert!(txt.contains("1/3 -7/2 4 2/5 1/9"));
        assert_eq!(read_text::<ExactScalar>(&txt).unwrap(), v);
    }

    #[test]
    fn json_round_trip() {
        let v = sample();
        let js = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<GaussVector<ExactScalar>>(&js).unwrap(), v);
        let f = v.to_c64().scale(&Complex64::new(0.1, 1.0 / 3.0));
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<GaussVector<Complex64>>(&js).unwrap(), f);
        assert_eq!(read_text::<Complex64>(&write_text(&f)).unwrap(), f);
    }

    #[test]
    fn malformed_input_rejected() {
        assert!(read_text::<ExactScalar>("1 0 2 0").is_err());
        assert!(read_text::<ExactScalar>("1 0 2 0 -1").is_err());
        assert!(read_text::<ExactScalar>("1 0 x 0 1").is_err());
    }
}
