//! JSON interchange: `{"q": 5, "n": 2, "terms": [{"c": 1, "e": [1, 1]}]}` for
//! a polynomial, an array of those for a family, and `{"values": [...]}` for a
//! function on an enumerated variety.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, PrimeField};
use crate::poly::{MultiPoly, PolyFamily};
use crate::weakpoly::FunctionOnX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: i64,
    pub e: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub q: u64,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &MultiPoly) -> Self {
        PolyJson {
            q: p.field().p() as u64,
            n: p.nvars(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    c: c.0 as i64,
                    e: m.exps().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MultiPoly> {
        let field = PrimeField::new(self.q)?;
        for t in &self.terms {
            if t.e.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: t.e.len(),
                });
            }
        }
        MultiPoly::from_terms(field, self.n, self.terms.iter().map(|t| (t.c, t.e.clone())))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum PolyOrFamily {
    One(PolyJson),
    Many(Vec<PolyJson>),
}

pub fn parse_poly(s: &str) -> Result<MultiPoly> {
    let j: PolyJson = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("polynomial JSON: {e}")))?;
    j.to_poly()
}

/// A single polynomial is accepted as a one-element family.
pub fn parse_family(s: &str) -> Result<PolyFamily> {
    let j: PolyOrFamily = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("family JSON: {e}")))?;
    let polys = match j {
        PolyOrFamily::One(p) => vec![p.to_poly()?],
        PolyOrFamily::Many(v) => v.iter().map(PolyJson::to_poly).collect::<Result<_>>()?,
    };
    PolyFamily::new(polys)
}

pub fn poly_to_json(p: &MultiPoly) -> serde_json::Value {
    serde_json::to_value(PolyJson::from_poly(p)).expect("plain data")
}

pub fn family_to_json(f: &PolyFamily) -> serde_json::Value {
    serde_json::Value::Array(f.polys().iter().map(poly_to_json).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FunctionJson {
    values: Vec<i64>,
}

pub fn parse_function(s: &str, field: PrimeField, len: usize) -> Result<FunctionOnX> {
    let j: FunctionJson = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("function JSON: {e}")))?;
    if j.values.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            got: j.values.len(),
        });
    }
    Ok(FunctionOnX::new(j.values.into_iter().map(|v| field.elem(v)).collect()))
}

pub fn function_to_json(f: &FunctionOnX) -> serde_json::Value {
    serde_json::json!({ "values": f.values.iter().map(|v: &Fe| v.0).collect::<Vec<_>>() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = r#"{"q": 5, "n": 2, "terms": [{"c": 1, "e": [1, 1]}, {"c": -1, "e": [0, 2]}]}"#;
        let p = parse_poly(s).unwrap();
        assert_eq!(p.num_terms(), 2);
        let back = parse_poly(&poly_to_json(&p).to_string()).unwrap();
        assert_eq!(p, back);
        let fam = parse_family(&format!("[{s}, {s}]")).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(parse_family(s).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_poly("{").is_err());
        assert!(matches!(parse_poly(r#"{"q": 4, "n": 1, "terms": []}"#), Err(Error::NotPrime(_))));
        assert!(parse_poly(r#"{"q": 5, "n": 2, "terms": [{"c": 1, "e": [1]}]}"#).is_err());
        let f = PrimeField::new(3).unwrap();
        assert!(parse_function(r#"{"values": [1, 2]}"#, f, 3).is_err());
        assert_eq!(parse_function(r#"{"values": [4, -1]}"#, f, 2).unwrap().values, vec![Fe(1), Fe(2)]);
    }
}
