//! Elements of the ultrapower: families `i ↦ x_i` given by a finite table
//! or by a closed form in the index.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::growth::{ExpPoly, Term};
use crate::prime::Prime;
use crate::rational::{format_rational, parse_rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    Constant(BigRational),
    /// Coefficients of `Σ c_k i^k`, lowest degree first.
    Poly(Vec<BigRational>),
    /// The `i`-th prime, 0-based (index 3 is 7).
    PrimeSeq,
    /// `1 + p + … + p^i`.
    GeometricPartial(Prime),
    /// `b^i`.
    PowerSeq(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndexedElement {
    Table(Vec<BigRational>),
    Closed(ClosedForm),
    /// Linear combination of exponential-polynomial terms.
    Sum(ExpPoly),
}

impl ClosedForm {
    pub fn to_exp_poly(&self) -> ExpPoly {
        match self {
            ClosedForm::Constant(c) => ExpPoly::constant(c.clone()),
            ClosedForm::Poly(cs) => cs.iter().enumerate().fold(ExpPoly::zero(), |acc, (k, c)| {
                acc.add(&ExpPoly::exp(c.clone(), BigRational::one(), k as u32))
            }),
            ClosedForm::PrimeSeq => ExpPoly::term(Term::Prime, BigRational::one()),
            ClosedForm::GeometricPartial(p) => {
                let q = BigRational::from_integer(p.to_bigint());
                let d = &q - BigRational::one();
                ExpPoly::exp(&q / &d, q, 0).add(&ExpPoly::constant(-BigRational::one() / d))
            }
            ClosedForm::PowerSeq(b) => ExpPoly::exp(BigRational::one(), b.clone(), 0),
        }
    }
}

impl From<ClosedForm> for IndexedElement {
    fn from(c: ClosedForm) -> IndexedElement {
        IndexedElement::Closed(c)
    }
}

impl From<ExpPoly> for IndexedElement {
    fn from(e: ExpPoly) -> IndexedElement {
        IndexedElement::Sum(e)
    }
}

impl IndexedElement {
    pub fn constant(q: BigRational) -> IndexedElement {
        ClosedForm::Constant(q).into()
    }

    pub fn power(b: BigRational) -> IndexedElement {
        ClosedForm::PowerSeq(b).into()
    }

    pub fn to_exp_poly(&self) -> Option<ExpPoly> {
        match self {
            IndexedElement::Table(_) => None,
            IndexedElement::Closed(c) => Some(c.to_exp_poly()),
            IndexedElement::Sum(e) => Some(e.clone()),
        }
    }

    pub fn eval(&self, i: usize) -> Option<BigRational> {
        match self {
            IndexedElement::Table(t) => t.get(i).cloned(),
            other => Some(other.to_exp_poly()?.eval(i)),
        }
    }

    /// The standard rational this family is constant at, if visibly so.
    pub fn as_constant(&self) -> Option<BigRational> {
        let e = self.to_exp_poly()?;
        let mut terms = e.terms();
        match (terms.next(), terms.next()) {
            (None, _) => Some(BigRational::zero()),
            (Some((Term::Exp { base, degree: 0 }, c)), None) if base.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    fn table_len(&self, other: &IndexedElement) -> Option<usize> {
        match (self, other) {
            (IndexedElement::Table(a), IndexedElement::Table(b)) => Some(a.len().min(b.len())),
            (IndexedElement::Table(a), _) | (_, IndexedElement::Table(a)) => Some(a.len()),
            _ => None,
        }
    }

    fn pointwise(&self, other: &IndexedElement, f: impl Fn(BigRational, BigRational) -> BigRational) -> IndexedElement {
        let n = self.table_len(other).unwrap_or(0);
        IndexedElement::Table((0..n).map(|i| f(self.eval(i).unwrap(), other.eval(i).unwrap())).collect())
    }

    pub fn add(&self, other: &IndexedElement) -> IndexedElement {
        match (self.to_exp_poly(), other.to_exp_poly()) {
            (Some(a), Some(b)) => a.add(&b).into(),
            _ => self.pointwise(other, |x, y| x + y),
        }
    }

    pub fn neg(&self) -> IndexedElement {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &IndexedElement) -> IndexedElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &BigRational) -> IndexedElement {
        match self {
            IndexedElement::Table(t) => IndexedElement::Table(t.iter().map(|x| x * s).collect()),
            other => other.to_exp_poly().unwrap().scale(s).into(),
        }
    }

    pub fn mul(&self, other: &IndexedElement) -> Result<IndexedElement> {
        match (self.to_exp_poly(), other.to_exp_poly()) {
            (Some(a), Some(b)) => a
                .mul(&b)
                .map(Into::into)
                .ok_or_else(|| Error::Invalid("product has no closed form".into())),
            _ => Ok(self.pointwise(other, |x, y| x * y)),
        }
    }

    pub fn to_json(&self) -> Value {
        let q = |x: &BigRational| Value::String(format_rational(x));
        match self {
            IndexedElement::Table(t) => json!({ "table": t.iter().map(q).collect::<Vec<_>>() }),
            IndexedElement::Closed(c) => match c {
                ClosedForm::Constant(x) => json!({ "constant": q(x) }),
                ClosedForm::Poly(cs) => json!({ "poly": cs.iter().map(q).collect::<Vec<_>>() }),
                ClosedForm::PrimeSeq => json!("prime_seq"),
                ClosedForm::GeometricPartial(p) => json!({ "geometric_partial": p }),
                ClosedForm::PowerSeq(b) => json!({ "power_seq": q(b) }),
            },
            IndexedElement::Sum(e) => {
                let terms: Vec<Value> = e
                    .terms()
                    .map(|(t, c)| match t {
                        Term::Exp { base, degree } => json!({ "coeff": q(c), "base": q(base), "degree": degree }),
                        Term::Prime => json!({ "coeff": q(c), "prime": true }),
                    })
                    .collect();
                json!({ "sum": terms })
            }
        }
    }

    /// Accepts the forms written by [`IndexedElement::to_json`], plus a bare
    /// number or rational string for a constant.
    pub fn from_json(v: &Value) -> Result<IndexedElement> {
        let bad = || Error::Invalid(format!("not an indexed element: {v}"));
        let rat = |x: &Value| -> Result<BigRational> {
            match x {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(bad()),
            }
        };
        let rats = |x: &Value| -> Result<Vec<BigRational>> { x.as_array().ok_or_else(bad)?.iter().map(rat).collect() };
        match v {
            Value::Number(_) => return Ok(IndexedElement::constant(rat(v)?)),
            Value::String(s) if s == "prime_seq" => return Ok(ClosedForm::PrimeSeq.into()),
            Value::String(_) => return Ok(IndexedElement::constant(rat(v)?)),
            _ => {}
        }
        let obj = v.as_object().ok_or_else(bad)?;
        let (key, val) = match obj.iter().next() {
            Some(kv) if obj.len() == 1 => kv,
            _ => return Err(bad()),
        };
        Ok(match key.as_str() {
            "table" => IndexedElement::Table(rats(val)?),
            "constant" => IndexedElement::constant(rat(val)?),
            "poly" => ClosedForm::Poly(rats(val)?).into(),
            "power_seq" => IndexedElement::power(rat(val)?),
            "geometric_partial" => {
                let p: Prime = serde_json::from_value(val.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
                ClosedForm::GeometricPartial(p).into()
            }
            "sum" => {
                let mut acc = ExpPoly::zero();
                for t in val.as_array().ok_or_else(bad)? {
                    let c = rat(t.get("coeff").ok_or_else(bad)?)?;
                    if t.get("prime").and_then(Value::as_bool) == Some(true) {
                        acc = acc.add(&ExpPoly::term(Term::Prime, c));
                    } else {
                        let base = rat(t.get("base").ok_or_else(bad)?)?;
                        let degree = t.get("degree").and_then(Value::as_u64).unwrap_or(0) as u32;
                        acc = acc.add(&ExpPoly::exp(c, base, degree));
                    }
                }
                IndexedElement::Sum(acc)
            }
            _ => return Err(bad()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::p;
    use crate::rational::{int, rat};

    #[test]
    fn closed_forms_evaluate() {
        assert_eq!(IndexedElement::from(ClosedForm::PrimeSeq).eval(3), Some(int(7)));
        let g = IndexedElement::from(ClosedForm::GeometricPartial(p(2)));
        assert_eq!(g.eval(4), Some(int(31)));
        let poly = IndexedElement::from(ClosedForm::Poly(vec![int(1), int(0), int(2)]));
        assert_eq!(poly.eval(3), Some(int(19)));
        assert_eq!(IndexedElement::power(rat(1, 2)).eval(3), Some(rat(1, 8)));
        assert_eq!(IndexedElement::Table(vec![int(1)]).eval(1), None);
    }

    #[test]
    fn arithmetic() {
        let x = IndexedElement::power(int(3));
        let y = IndexedElement::constant(int(5));
        let s = x.add(&y);
        assert_eq!(s.eval(2), Some(int(14)));
        assert_eq!(s.sub(&y).as_constant(), None);
        assert_eq!(s.sub(&x).as_constant(), Some(int(5)));
        let t = IndexedElement::Table(vec![int(1), int(2), int(3)]);
        assert_eq!(t.mul(&x).unwrap(), IndexedElement::Table(vec![int(1), int(6), int(27)]));
        let pr = IndexedElement::from(ClosedForm::PrimeSeq);
        assert!(pr.mul(&pr).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let cases = vec![
            IndexedElement::Table(vec![rat(1, 2), int(3)]),
            IndexedElement::constant(rat(-3, 4)),
            ClosedForm::Poly(vec![int(0), int(1)]).into(),
            ClosedForm::PrimeSeq.into(),
            ClosedForm::GeometricPartial(p(3)).into(),
            IndexedElement::power(int(2)),
            IndexedElement::power(int(2)).add(&IndexedElement::from(ClosedForm::PrimeSeq)),
        ];
        for c in cases {
            let v = c.to_json();
            assert_eq!(IndexedElement::from_json(&v).unwrap(), c, "{v}");
        }
        assert_eq!(IndexedElement::from_json(&serde_json::json!("7/3")).unwrap(), IndexedElement::constant(rat(7, 3)));
    }
}
