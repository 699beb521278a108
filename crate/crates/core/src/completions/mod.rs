//! Completions of `ℚ` at its places, the finite/infinitesimal hierarchy on
//! closed-form elements, approximation and adeles.

mod adele;
mod approx;
mod padic;

pub use adele::{adele_add, adele_from_rational, adele_mul, hausdorff_equal, idele_inv, idele_mul, Adele, Idele, Tail};
pub use approx::{simplest_between, weak_approx, weak_approx_targets, ApproxCheck, ApproxLimits, ApproxResult, Target};
pub use padic::{padic_from_rational, PAdic};

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::growth::{PadicGrowth, RealGrowth};
use crate::internal::IndexedElement;
use crate::prime::Prime;
use crate::rational::{as_string, format_rational};

/// A place of `ℚ`; finite places sort before the real one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Prime),
    Real,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Real => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "real" | "∞" => Ok(Place::Real),
            t => Ok(Place::Finite(t.parse()?)),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Place, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Place {
    /// `|x|_v` for a rational; at finite places this is `p^{-v_p(x)}`.
    pub fn abs(&self, x: &BigRational) -> BigRational {
        match self {
            _ if x.is_zero() => BigRational::zero(),
            Place::Real => x.abs(),
            Place::Finite(p) => {
                let v = crate::prime::val_rat(x, p);
                let pw = BigRational::from_integer(p.pow(v.unsigned_abs() as u32));
                if v >= 0 {
                    pw.recip()
                } else {
                    pw
                }
            }
        }
    }
}

/// A real number as an exact midpoint with an error radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RealInterval {
    #[serde(with = "as_string")]
    pub mid: BigRational,
    #[serde(with = "as_string")]
    pub rad: BigRational,
}

impl RealInterval {
    pub fn exact(x: BigRational) -> RealInterval {
        RealInterval { mid: x, rad: BigRational::zero() }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (x - &self.mid).abs() <= self.rad
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        (&self.mid - &other.mid).abs() <= &self.rad + &other.rad
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval { mid: &self.mid + &other.mid, rad: &self.rad + &other.rad }
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval { mid: -&self.mid, rad: self.rad.clone() }
    }

    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let rad = self.mid.abs() * &other.rad + other.mid.abs() * &self.rad + &self.rad * &other.rad;
        RealInterval { mid: &self.mid * &other.mid, rad }
    }

    /// Bounded away from zero.
    pub fn is_invertible(&self) -> bool {
        self.mid.abs() > self.rad
    }

    pub fn inv(&self) -> Result<RealInterval> {
        if !self.is_invertible() {
            return Err(Error::DivisionByZero);
        }
        let m = self.mid.abs();
        let rad = &self.rad / (&m * (&m - &self.rad));
        Ok(RealInterval { mid: self.mid.recip(), rad })
    }
}

/// A component of an adele or a projection.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum CompletionValue {
    PAdic(PAdic),
    Real(RealInterval),
}

impl CompletionValue {
    pub fn of_rational(q: &BigRational, place: &Place, precision: u32) -> Result<CompletionValue> {
        Ok(match place {
            Place::Finite(p) => CompletionValue::PAdic(padic_from_rational(q, p, precision)?),
            Place::Real => CompletionValue::Real(RealInterval::exact(q.clone())),
        })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CompletionValue::PAdic(a) => a.is_zero(),
            CompletionValue::Real(r) => !r.is_invertible(),
        }
    }

    pub fn approx_eq(&self, other: &CompletionValue) -> bool {
        match (self, other) {
            (CompletionValue::PAdic(a), CompletionValue::PAdic(b)) => a.approx_eq(b),
            (CompletionValue::Real(a), CompletionValue::Real(b)) => a.overlaps(b),
            _ => false,
        }
    }

    /// Does `q` lie in the set this value stands for?
    pub fn represents(&self, q: &BigRational) -> bool {
        match self {
            CompletionValue::PAdic(a) => a.congruent_to(q),
            CompletionValue::Real(r) => r.contains(q),
        }
    }

    fn zip(&self, other: &CompletionValue, f: impl Fn(&PAdic, &PAdic) -> Result<PAdic>, g: impl Fn(&RealInterval, &RealInterval) -> RealInterval) -> Result<CompletionValue> {
        match (self, other) {
            (CompletionValue::PAdic(a), CompletionValue::PAdic(b)) => Ok(CompletionValue::PAdic(f(a, b)?)),
            (CompletionValue::Real(a), CompletionValue::Real(b)) => Ok(CompletionValue::Real(g(a, b))),
            _ => Err(Error::Invalid("components at different places".into())),
        }
    }

    pub fn add(&self, other: &CompletionValue) -> Result<CompletionValue> {
        self.zip(other, PAdic::add, RealInterval::add)
    }

    pub fn mul(&self, other: &CompletionValue) -> Result<CompletionValue> {
        self.zip(other, PAdic::mul, RealInterval::mul)
    }

    pub fn inv(&self) -> Result<CompletionValue> {
        match self {
            CompletionValue::PAdic(a) => Ok(CompletionValue::PAdic(a.inv()?)),
            CompletionValue::Real(r) => Ok(CompletionValue::Real(r.inv()?)),
        }
    }
}

impl fmt::Display for CompletionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletionValue::PAdic(a) => write!(f, "{a}"),
            CompletionValue::Real(r) => write!(f, "{} ± {}", format_rational(&r.mid), format_rational(&r.rad)),
        }
    }
}

/// Position of an element in `inf_v ⊂ ns_v ⊂ fin_v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Infinitesimal,
    Nearstandard(#[serde(with = "as_string")] BigRational),
    Finite,
    Infinite,
    Undecidable,
}

impl Classification {
    /// `inf_v ⊂ ns_v ⊂ fin_v` as a rank; `Undecidable` has none.
    pub fn level(&self) -> Option<u8> {
        match self {
            Classification::Infinitesimal => Some(0),
            Classification::Nearstandard(_) => Some(1),
            Classification::Finite => Some(2),
            Classification::Infinite => Some(3),
            Classification::Undecidable => None,
        }
    }
}

pub fn classify_element(x: &IndexedElement, place: &Place) -> Classification {
    let Some(e) = x.to_exp_poly() else {
        return Classification::Undecidable;
    };
    match place {
        Place::Real => match e.real_growth() {
            RealGrowth::Zero | RealGrowth::Vanishing => Classification::Infinitesimal,
            RealGrowth::Converges(l) => Classification::Nearstandard(l),
            RealGrowth::Oscillating => Classification::Finite,
            RealGrowth::Unbounded => Classification::Infinite,
            RealGrowth::Undecidable => Classification::Undecidable,
        },
        Place::Finite(p) => match e.padic_growth(p) {
            PadicGrowth::Zero | PadicGrowth::Infinitesimal => Classification::Infinitesimal,
            PadicGrowth::Nearstandard(l) => Classification::Nearstandard(l),
            PadicGrowth::Finite => Classification::Finite,
            PadicGrowth::Unbounded => Classification::Infinite,
            PadicGrowth::Undecidable => Classification::Undecidable,
        },
    }
}

/// The standard part of a nearstandard element at `place`, at precision
/// `precision`.
pub fn standard_part(x: &IndexedElement, place: &Place, precision: u32) -> Result<Option<CompletionValue>> {
    match classify_element(x, place) {
        Classification::Infinitesimal => CompletionValue::of_rational(&BigRational::zero(), place, precision).map(Some),
        Classification::Nearstandard(l) => CompletionValue::of_rational(&l, place, precision).map(Some),
        _ => Ok(None),
    }
}

/// Componentwise image of a rational in `∏ K_v`.
pub fn phi_project(x: &BigRational, places: &[Place], precision: u32) -> Result<Vec<CompletionValue>> {
    places.iter().map(|v| CompletionValue::of_rational(x, v, precision)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::internal::ClosedForm;
    use crate::prime::p;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn place_parsing_and_order() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Real);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Finite(p(7)));
        assert!("8".parse::<Place>().is_err());
        assert!(Place::Finite(p(1009)) < Place::Real);
        assert_eq!(serde_json::to_string(&Place::Real).unwrap(), "\"inf\"");
        assert_eq!(Place::Finite(p(2)).abs(&rat(3, 8)), int(8));
        assert_eq!(Place::Finite(p(3)).abs(&int(18)), rat(1, 9));
    }

    #[test]
    fn classification_examples() {
        let two = Place::Finite(p(2));
        let three = Place::Finite(p(3));
        for pl in [&two, &three, &Place::Real] {
            assert_eq!(classify_element(&IndexedElement::constant(rat(5, 7)), pl), Classification::Nearstandard(rat(5, 7)));
        }
        let g3: IndexedElement = ClosedForm::GeometricPartial(p(3)).into();
        assert_eq!(classify_element(&g3, &three), Classification::Nearstandard(rat(-1, 2)));
        let lim = standard_part(&g3, &three, 8).unwrap().unwrap();
        let CompletionValue::PAdic(y) = lim else { panic!() };
        assert!(y.mul(&padic_from_rational(&int(-2), &p(3), 8).unwrap()).unwrap().congruent_to(&int(1)));
        assert_eq!(classify_element(&g3, &Place::Real), Classification::Infinite);
        let pw = IndexedElement::power(int(2));
        assert_eq!(classify_element(&pw, &two), Classification::Infinitesimal);
        assert_eq!(classify_element(&pw, &Place::Real), Classification::Infinite);
        assert_eq!(classify_element(&pw, &three), Classification::Finite);
        assert_eq!(classify_element(&IndexedElement::Table(vec![int(1)]), &two), Classification::Undecidable);
        let pr: IndexedElement = ClosedForm::PrimeSeq.into();
        assert_eq!(classify_element(&pr, &two), Classification::Finite);
    }

    #[test]
    fn phi_examples() {
        let places = [Place::Finite(p(2)), Place::Finite(p(3)), Place::Real];
        let v = phi_project(&int(12), &places, 4).unwrap();
        let CompletionValue::PAdic(a) = &v[0] else { panic!() };
        let CompletionValue::PAdic(b) = &v[1] else { panic!() };
        assert_eq!((a.val(), b.val()), (Some(2), Some(1)));
        assert_eq!(v[2], CompletionValue::Real(RealInterval::exact(int(12))));
        for c in phi_project(&int(1), &places, 4).unwrap() {
            match c {
                CompletionValue::PAdic(a) => assert!(a.is_unit()),
                CompletionValue::Real(r) => assert_eq!(r.mid, int(1)),
            }
        }
        let CompletionValue::PAdic(k) = &phi_project(&int(48), &places[..1], 4).unwrap()[0] else { panic!() };
        assert!(k.is_zero_mod(4));
    }

    #[test]
    fn interval_inverse_encloses() {
        let r = RealInterval { mid: int(2), rad: rat(1, 10) };
        let i = r.inv().unwrap();
        assert!(i.contains(&rat(10, 19)) && i.contains(&rat(10, 21)));
        assert!(RealInterval { mid: int(0), rad: rat(1, 10) }.inv().is_err());
    }

    proptest! {
        #[test]
        fn phi_is_a_ring_map(a in -300i64..300, b in 1i64..200, c in -300i64..300, d in 1i64..200) {
            let places = [Place::Finite(p(2)), Place::Finite(p(3)), Place::Finite(p(5)), Place::Real];
            let (x, y) = (rat(a, b), rat(c, d));
            let (px, py) = (phi_project(&x, &places, 6).unwrap(), phi_project(&y, &places, 6).unwrap());
            let (ps, pm) = (phi_project(&(&x + &y), &places, 6).unwrap(), phi_project(&(&x * &y), &places, 6).unwrap());
            for i in 0..places.len() {
                prop_assert!(px[i].add(&py[i]).unwrap().approx_eq(&ps[i]));
                prop_assert!(px[i].mul(&py[i]).unwrap().approx_eq(&pm[i]));
            }
        }
    }
}
