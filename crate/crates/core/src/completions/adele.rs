//! Adeles and ideles of `ℚ` with finitely many exceptional components and a
//! rational tail that is integral (or a unit) everywhere else.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{classify_element, Classification, CompletionValue, Place};
use crate::divisor::factor_rational;
use crate::error::{Error, Result};
use crate::internal::IndexedElement;
use crate::rational::as_string;
use crate::Decision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Integral at every place outside the exceptional set.
    Integral,
    /// A unit at every place outside the exceptional set.
    Unit,
}

/// `(x_v)` with `x_v` stored for `v ∈ S` and equal to the image of
/// `tail_value` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Adele {
    exceptional: BTreeMap<Place, CompletionValue>,
    tail: Tail,
    #[serde(with = "as_string")]
    tail_value: BigRational,
    precision: u32,
}

/// An adele whose components are all invertible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Idele(Adele);

/// Places of `q`'s divisor (numerator and denominator when `units`).
fn bad_places(q: &BigRational, units: bool) -> Result<BTreeSet<Place>> {
    if q.is_zero() {
        return Ok(BTreeSet::new());
    }
    Ok(factor_rational(q)?
        .iter()
        .filter(|(_, e)| units || *e < 0)
        .map(|(p, _)| Place::Finite(p.clone()))
        .collect())
}

impl Adele {
    pub fn new(exceptional: BTreeMap<Place, CompletionValue>, tail: Tail, tail_value: BigRational, precision: u32) -> Result<Adele> {
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let unit = tail == Tail::Unit;
        if unit && tail_value.is_zero() {
            return Err(Error::NotAnIdele);
        }
        if bad_places(&tail_value, unit)?.iter().any(|v| !exceptional.contains_key(v)) {
            return Err(if unit { Error::NotAnIdele } else { Error::NonIntegralTail });
        }
        Ok(Adele { exceptional, tail, tail_value, precision })
    }

    pub fn zero(precision: u32) -> Adele {
        Adele { exceptional: BTreeMap::new(), tail: Tail::Integral, tail_value: BigRational::zero(), precision }
    }

    pub fn one(precision: u32) -> Adele {
        Adele { exceptional: BTreeMap::new(), tail: Tail::Unit, tail_value: BigRational::one(), precision }
    }

    pub fn exceptional(&self) -> &BTreeMap<Place, CompletionValue> {
        &self.exceptional
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn tail_value(&self) -> &BigRational {
        &self.tail_value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The component at `v`.
    pub fn component(&self, v: &Place) -> CompletionValue {
        match self.exceptional.get(v) {
            Some(c) => c.clone(),
            None => CompletionValue::of_rational(&self.tail_value, v, self.precision).expect("positive precision"),
        }
    }

    fn zip(&self, other: &Adele, f: impl Fn(&CompletionValue, &CompletionValue) -> Result<CompletionValue>) -> Result<BTreeMap<Place, CompletionValue>> {
        if self.precision != other.precision {
            return Err(Error::PrecisionMismatch);
        }
        let places: BTreeSet<&Place> = self.exceptional.keys().chain(other.exceptional.keys()).collect();
        places.into_iter().map(|v| Ok((v.clone(), f(&self.component(v), &other.component(v))?))).collect()
    }

    pub fn neg(&self) -> Adele {
        let minus = Adele { tail_value: -BigRational::one(), tail: Tail::Unit, ..Adele::one(self.precision) };
        adele_mul(self, &minus).expect("same precision")
    }

    /// Components agree within their precision on the union of the
    /// exceptional sets, and the tails coincide.
    pub fn approx_eq(&self, other: &Adele) -> bool {
        self.precision == other.precision
            && self.tail_value == other.tail_value
            && self.exceptional.keys().chain(other.exceptional.keys()).all(|v| self.component(v).approx_eq(&other.component(v)))
    }
}

pub fn adele_add(a: &Adele, b: &Adele) -> Result<Adele> {
    let exceptional = a.zip(b, CompletionValue::add)?;
    Ok(Adele { exceptional, tail: Tail::Integral, tail_value: &a.tail_value + &b.tail_value, precision: a.precision })
}

pub fn adele_mul(a: &Adele, b: &Adele) -> Result<Adele> {
    let exceptional = a.zip(b, CompletionValue::mul)?;
    let tail = if a.tail == Tail::Unit && b.tail == Tail::Unit { Tail::Unit } else { Tail::Integral };
    Ok(Adele { exceptional, tail, tail_value: &a.tail_value * &b.tail_value, precision: a.precision })
}

/// Diagonal image of `q`, with components on `places` stored explicitly.
pub fn adele_from_rational(q: &BigRational, places: &[Place], precision: u32) -> Result<Adele> {
    let exceptional = places
        .iter()
        .map(|v| Ok((v.clone(), CompletionValue::of_rational(q, v, precision)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Adele::new(exceptional, Tail::Integral, q.clone(), precision)
}

impl TryFrom<Adele> for Idele {
    type Error = Error;

    fn try_from(a: Adele) -> Result<Idele> {
        if a.exceptional.values().any(CompletionValue::is_zero) {
            return Err(Error::NotAnIdele);
        }
        Adele::new(a.exceptional, Tail::Unit, a.tail_value, a.precision).map(Idele)
    }
}

impl Idele {
    pub fn from_rational(q: &BigRational, places: &[Place], precision: u32) -> Result<Idele> {
        adele_from_rational(q, places, precision).map_err(|_| Error::NotAnIdele)?.try_into()
    }

    pub fn one(precision: u32) -> Idele {
        Idele(Adele::one(precision))
    }

    pub fn as_adele(&self) -> &Adele {
        &self.0
    }

    pub fn into_adele(self) -> Adele {
        self.0
    }
}

pub fn idele_mul(a: &Idele, b: &Idele) -> Result<Idele> {
    Ok(Idele(adele_mul(&a.0, &b.0)?))
}

pub fn idele_inv(a: &Idele) -> Result<Idele> {
    let exceptional = a
        .0
        .exceptional
        .iter()
        .map(|(v, c)| Ok((v.clone(), c.inv().map_err(|_| Error::NotAnIdele)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(Idele(Adele { exceptional, tail: Tail::Unit, tail_value: a.0.tail_value.recip(), precision: a.0.precision }))
}

/// Equality in the quotient by the infinitesimals at `places`: the
/// difference is infinitesimal at each of them.
pub fn hausdorff_equal(x: &IndexedElement, y: &IndexedElement, places: &[Place]) -> Decision<bool> {
    let d = x.sub(y);
    let mut undecided = false;
    for v in places {
        match classify_element(&d, v) {
            Classification::Infinitesimal => {}
            Classification::Undecidable => undecided = true,
            _ => return Decision::Decided(false),
        }
    }
    if undecided {
        Decision::Undecidable
    } else {
        Decision::Decided(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completions::PAdic;
    use crate::prime::p;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn places(xs: &[&str]) -> Vec<Place> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn from_rational_checks_tail() {
        assert!(adele_from_rational(&rat(1, 2), &places(&["2", "inf"]), 4).is_ok());
        assert_eq!(adele_from_rational(&rat(1, 2), &places(&["3"]), 4), Err(Error::NonIntegralTail));
        let a = adele_from_rational(&rat(9, 10), &places(&["2", "5", "inf"]), 4).unwrap();
        for q in ["3", "7"] {
            let CompletionValue::PAdic(c) = a.component(&q.parse().unwrap()) else { panic!() };
            assert!(c.is_integral());
        }
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["tail"], "integral");
        assert!(json["exceptional"]["inf"].is_object() && json["exceptional"]["2"].is_object());
    }

    #[test]
    fn arithmetic_examples() {
        let s = places(&["2", "3", "inf"]);
        let a = adele_from_rational(&rat(5, 6), &s, 6).unwrap();
        assert!(adele_add(&a, &Adele::zero(6)).unwrap().approx_eq(&a));
        let b = adele_from_rational(&rat(-4, 7), &places(&["7"]), 6).unwrap();
        let prod = adele_mul(&a, &b).unwrap();
        let direct = adele_from_rational(&rat(-20, 42), &places(&["2", "3", "7", "inf"]), 6).unwrap();
        assert!(prod.approx_eq(&direct));
        assert_eq!(adele_add(&a, &Adele::zero(5)), Err(Error::PrecisionMismatch));
    }

    #[test]
    fn ideles() {
        let s = places(&["2", "3", "inf"]);
        let x = Idele::from_rational(&rat(-12, 1), &s, 5).unwrap();
        let inv = idele_inv(&x).unwrap();
        assert!(idele_mul(&x, &inv).unwrap().as_adele().approx_eq(&Idele::one(5).into_adele().clone_with_places(&s)));
        assert_eq!(Idele::from_rational(&rat(10, 1), &s, 5), Err(Error::NotAnIdele));
        let mut ex = BTreeMap::new();
        ex.insert(Place::Finite(p(2)), CompletionValue::PAdic(PAdic::zero(p(2), 5)));
        let z = Adele::new(ex, Tail::Integral, int(1), 5).unwrap();
        assert_eq!(Idele::try_from(z), Err(Error::NotAnIdele));
    }

    #[test]
    fn hausdorff_examples() {
        let x = IndexedElement::constant(rat(3, 5));
        let bumped = x.add(&IndexedElement::power(int(2)));
        assert_eq!(hausdorff_equal(&x, &bumped, &places(&["2"])), Decision::Decided(true));
        assert_eq!(hausdorff_equal(&x, &bumped, &places(&["2", "inf"])), Decision::Decided(false));
        assert_eq!(hausdorff_equal(&x, &x.add(&IndexedElement::constant(int(1))), &places(&["2"])), Decision::Decided(false));
        let t = IndexedElement::Table(vec![int(1)]);
        assert_eq!(hausdorff_equal(&x, &t, &places(&["3"])), Decision::Undecidable);
    }

    impl Adele {
        fn clone_with_places(&self, s: &[Place]) -> Adele {
            let exceptional = s.iter().map(|v| (v.clone(), self.component(v))).collect();
            Adele { exceptional, ..self.clone() }
        }
    }

    fn sample() -> impl Strategy<Value = Adele> {
        let s = prop::sample::subsequence(vec!["2", "3", "5", "inf"], 0..=4);
        ((-99i64..99), prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 10, 12, 15, 30]), s).prop_map(|(n, d, s)| {
            let mut pl = places(&s);
            for q in [2u64, 3, 5] {
                if d % q as i64 == 0 && !pl.contains(&Place::Finite(p(q))) {
                    pl.push(Place::Finite(p(q)));
                }
            }
            adele_from_rational(&rat(n, d), &pl, 6).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in sample(), b in sample(), c in sample()) {
            let ab_c = adele_add(&adele_add(&a, &b).unwrap(), &c).unwrap();
            let a_bc = adele_add(&a, &adele_add(&b, &c).unwrap()).unwrap();
            prop_assert!(ab_c.approx_eq(&a_bc));
            let m1 = adele_mul(&adele_mul(&a, &b).unwrap(), &c).unwrap();
            let m2 = adele_mul(&a, &adele_mul(&b, &c).unwrap()).unwrap();
            prop_assert!(m1.approx_eq(&m2));
            let l = adele_mul(&a, &adele_add(&b, &c).unwrap()).unwrap();
            let r = adele_add(&adele_mul(&a, &b).unwrap(), &adele_mul(&a, &c).unwrap()).unwrap();
            prop_assert!(l.approx_eq(&r));
            prop_assert!(adele_add(&a, &a.neg()).unwrap().approx_eq(&Adele::zero(6)));
        }
    }
}
