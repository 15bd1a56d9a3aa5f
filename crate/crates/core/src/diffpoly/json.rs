//! JSON documents for differential polynomials:
//! `{"vars": [...], "terms": [{"exp": [...], "num": "..", "den": ".."}]}`.
//!
//! Variables are listed as `q<D>, ..., q1, q, s, t1, ..., t<J>`; terms are written
//! leading-first in the graded lexicographic order. Rationals travel as decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::poly::{DiffPoly, Monomial, Var};
use super::DiffPolyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub vars: Vec<String>,
    pub terms: Vec<TermDoc>,
}

fn canonical_vars(p: &DiffPoly) -> Vec<Var> {
    let mut vars = Vec::new();
    if let Some(d) = p.max_derivative_order() {
        vars.extend((0..=d).rev().map(Var::Q));
    }
    vars.push(Var::S);
    if let Some(j) = p.max_time_index() {
        vars.extend((1..=j).map(Var::T));
    }
    vars
}

impl From<&DiffPoly> for PolyDoc {
    fn from(p: &DiffPoly) -> Self {
        let vars = canonical_vars(p);
        let terms = p
            .terms()
            .rev()
            .map(|(m, c)| TermDoc {
                exp: vars.iter().map(|&v| m.exponent(v)).collect(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        PolyDoc {
            vars: vars.into_iter().map(Var::name).collect(),
            terms,
        }
    }
}

impl TryFrom<&PolyDoc> for DiffPoly {
    type Error = DiffPolyError;

    fn try_from(doc: &PolyDoc) -> Result<Self, Self::Error> {
        let schema = |msg: String| DiffPolyError::Schema(msg);
        let vars = doc
            .vars
            .iter()
            .map(|n| Var::parse(n).ok_or_else(|| schema(format!("unknown variable {n:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = DiffPoly::zero();
        let mut previous: Option<Monomial> = None;
        for (i, t) in doc.terms.iter().enumerate() {
            if t.exp.len() != vars.len() {
                return Err(schema(format!(
                    "term {i}: {} exponents for {} variables",
                    t.exp.len(),
                    vars.len()
                )));
            }
            let num =
                BigInt::from_str(&t.num).map_err(|e| schema(format!("term {i}: num: {e}")))?;
            let den =
                BigInt::from_str(&t.den).map_err(|e| schema(format!("term {i}: den: {e}")))?;
            if den.is_zero() || den.is_negative() {
                return Err(schema(format!("term {i}: denominator must be positive")));
            }
            let c = BigRational::new(num, den);
            if c.is_zero() {
                return Err(schema(format!("term {i}: zero coefficient stored")));
            }
            let m = Monomial::from_factors(vars.iter().copied().zip(t.exp.iter().copied()));
            if let Some(prev) = &previous {
                if m >= *prev {
                    return Err(schema(format!("term {i}: terms not in canonical order")));
                }
            }
            out.add_term(m.clone(), c);
            previous = Some(m);
        }
        Ok(out)
    }
}

impl DiffPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyDoc::from(self)).expect("plain data serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&PolyDoc::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<DiffPoly, DiffPolyError> {
        let doc: PolyDoc =
            serde_json::from_str(s).map_err(|e| DiffPolyError::Schema(e.to_string()))?;
        DiffPoly::try_from(&doc)
    }
}

pub(crate) fn serialize_poly<S: Serializer>(p: &DiffPoly, s: S) -> Result<S::Ok, S::Error> {
    PolyDoc::from(p).serialize(s)
}

pub(crate) fn serialize_polys<S: Serializer>(ps: &[DiffPoly], s: S) -> Result<S::Ok, S::Error> {
    let docs: Vec<PolyDoc> = ps.iter().map(PolyDoc::from).collect();
    docs.serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::poly::rat;

    #[test]
    fn document_layout() {
        let p = &(&DiffPoly::constant(rat(-5, 2)) * &(&DiffPoly::q(1) * &DiffPoly::q(1)))
            + &(&DiffPoly::t(1) * &DiffPoly::q(0));
        let doc = PolyDoc::from(&p);
        assert_eq!(doc.vars, vec!["q1", "q", "s", "t1"]);
        assert_eq!(doc.terms.len(), 2);
        assert_eq!(doc.terms[0].exp, vec![2, 0, 0, 0]);
        assert_eq!(
            (doc.terms[0].num.as_str(), doc.terms[0].den.as_str()),
            ("-5", "2")
        );
    }

    #[test]
    fn rejects_corruption() {
        let good = DiffPoly::q(2).to_json();
        assert_eq!(DiffPoly::from_json(&good).unwrap(), DiffPoly::q(2));
        let bad_den = good.replace("\"den\":\"1\"", "\"den\":\"0\"");
        assert!(matches!(
            DiffPoly::from_json(&bad_den),
            Err(DiffPolyError::Schema(_))
        ));
        let bad_var = good.replace("\"q2\"", "\"x2\"");
        assert!(DiffPoly::from_json(&bad_var).is_err());
        let extra = good.replace("\"vars\"", "\"extra\":1,\"vars\"");
        assert!(DiffPoly::from_json(&extra).is_err());
    }
}
