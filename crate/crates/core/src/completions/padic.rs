//! Fixed-precision `p`-adic numbers `p^val · unit`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::divisor::mod_inverse;
use crate::error::{Error, Result};
use crate::prime::{split_power, val_rat, Prime};
use crate::rational::format_rational;

/// `p^val · unit` with `unit` known modulo `p^precision`.
///
/// Zero has `val = None`; its `precision` is absolute, so it stands for an
/// element of `p^precision ℤ_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdic {
    prime: Prime,
    precision: i64,
    val: Option<i64>,
    unit: BigInt,
}

/// `q mod m` for `q` with denominator prime to `m`.
pub(crate) fn rat_mod(q: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(q.denom(), m)?;
    Some((q.numer() * inv).mod_floor(m))
}

fn pow_i(p: &Prime, e: i64) -> BigInt {
    p.pow(u32::try_from(e).expect("nonnegative exponent"))
}

pub fn padic_from_rational(q: &BigRational, p: &Prime, precision: u32) -> Result<PAdic> {
    if precision == 0 {
        return Err(Error::ZeroPrecision);
    }
    if q.is_zero() {
        return Ok(PAdic::zero(p.clone(), precision as i64));
    }
    let v = val_rat(q, p);
    let (num, _) = split_power(q.numer(), p);
    let (den, _) = split_power(q.denom(), p);
    let m = p.pow(precision);
    let unit = rat_mod(&BigRational::new(num, den), &m).expect("unit part is prime to p");
    Ok(PAdic { prime: p.clone(), precision: precision as i64, val: Some(v), unit })
}

impl PAdic {
    /// Zero known modulo `p^precision`.
    pub fn zero(prime: Prime, precision: i64) -> PAdic {
        PAdic { prime, precision, val: None, unit: BigInt::zero() }
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    /// Relative precision, or the absolute one for zero.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn val(&self) -> Option<i64> {
        self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    /// The element is known modulo `p^abs_precision`.
    pub fn abs_precision(&self) -> i64 {
        self.val.map_or(self.precision, |v| v + self.precision)
    }

    /// The canonical rational representative `p^val · unit`.
    pub fn to_rational(&self) -> BigRational {
        match self.val {
            None => BigRational::zero(),
            Some(v) if v >= 0 => BigRational::from_integer(&self.unit * pow_i(&self.prime, v)),
            Some(v) => BigRational::new(self.unit.clone(), pow_i(&self.prime, -v)),
        }
    }

    /// `v_p(x − q) ≥ abs_precision`.
    pub fn congruent_to(&self, q: &BigRational) -> bool {
        let d = self.to_rational() - q;
        d.is_zero() || val_rat(&d, &self.prime) >= self.abs_precision()
    }

    /// Both agree modulo the coarser of the two precisions.
    pub fn approx_eq(&self, other: &PAdic) -> bool {
        if self.prime != other.prime {
            return false;
        }
        let d = self.to_rational() - other.to_rational();
        d.is_zero() || val_rat(&d, &self.prime) >= self.abs_precision().min(other.abs_precision())
    }

    /// `x ≡ 0 mod p^n`, as far as the stored digits tell.
    pub fn is_zero_mod(&self, n: i64) -> bool {
        self.val.is_none_or(|v| v >= n)
    }

    fn check(&self, other: &PAdic) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &PAdic) -> Result<PAdic> {
        self.check(other)?;
        let p = &self.prime;
        let abs = self.abs_precision().min(other.abs_precision());
        let m = match [self.val, other.val].into_iter().flatten().min() {
            Some(m) if m < abs => m,
            _ => return Ok(PAdic::zero(p.clone(), abs)),
        };
        let modulus = pow_i(p, abs - m);
        let mut s = BigInt::zero();
        for x in [self, other] {
            if let Some(v) = x.val {
                s += &x.unit * pow_i(p, v - m);
            }
        }
        let s = s.mod_floor(&modulus);
        if s.is_zero() {
            return Ok(PAdic::zero(p.clone(), abs));
        }
        let (u, w) = split_power(&s, p);
        let val = m + w;
        let precision = abs - val;
        Ok(PAdic { prime: p.clone(), precision, val: Some(val), unit: u.mod_floor(&pow_i(p, precision)) })
    }

    pub fn neg(&self) -> PAdic {
        match self.val {
            None => self.clone(),
            Some(_) => PAdic { unit: (-&self.unit).mod_floor(&pow_i(&self.prime, self.precision)), ..self.clone() },
        }
    }

    pub fn sub(&self, other: &PAdic) -> Result<PAdic> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PAdic) -> Result<PAdic> {
        self.check(other)?;
        let p = self.prime.clone();
        Ok(match (self.val, other.val) {
            (Some(a), Some(b)) => {
                let precision = self.precision.min(other.precision);
                let unit = (&self.unit * &other.unit).mod_floor(&pow_i(&p, precision));
                PAdic { prime: p, precision, val: Some(a + b), unit }
            }
            (None, Some(v)) => PAdic::zero(p, self.precision + v),
            (Some(v), None) => PAdic::zero(p, other.precision + v),
            (None, None) => PAdic::zero(p, self.precision + other.precision),
        })
    }

    pub fn inv(&self) -> Result<PAdic> {
        let v = self.val.ok_or(Error::DivisionByZero)?;
        let m = pow_i(&self.prime, self.precision);
        let unit = mod_inverse(&self.unit, &m).expect("unit is prime to p");
        Ok(PAdic { val: Some(-v), unit, ..self.clone() })
    }

    pub fn div(&self, other: &PAdic) -> Result<PAdic> {
        self.mul(&other.inv()?)
    }

    /// Same element with relative precision capped at `n`.
    pub fn truncate(&self, n: i64) -> PAdic {
        match self.val {
            None => PAdic::zero(self.prime.clone(), self.precision.min(n)),
            Some(_) if n >= self.precision => self.clone(),
            Some(_) => PAdic { precision: n, unit: self.unit.mod_floor(&pow_i(&self.prime, n)), ..self.clone() },
        }
    }

    /// Is this a `p`-adic unit (valuation 0)?
    pub fn is_unit(&self) -> bool {
        self.val == Some(0)
    }

    pub fn is_integral(&self) -> bool {
        self.val.is_none_or(|v| v >= 0)
    }

    pub fn one(prime: Prime, precision: i64) -> PAdic {
        PAdic { prime, precision, val: Some(0), unit: BigInt::one() }
    }
}

impl Serialize for PAdic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PAdic", 4)?;
        st.serialize_field("p", &self.prime)?;
        st.serialize_field("precision", &self.precision)?;
        st.serialize_field("val", &self.val)?;
        st.serialize_field("unit", &self.unit.to_string())?;
        st.end()
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.val {
            None => write!(f, "O({}^{})", self.prime, self.precision),
            Some(_) => write!(f, "{} + O({}^{})", format_rational(&self.to_rational()), self.prime, self.abs_precision()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::p;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn from_rational_examples() {
        let a = padic_from_rational(&int(12), &p(2), 4).unwrap();
        assert_eq!((a.val(), a.unit().clone()), (Some(2), BigInt::from(3)));
        let b = padic_from_rational(&rat(1, 2), &p(2), 4).unwrap();
        assert_eq!((b.val(), b.unit().clone()), (Some(-1), BigInt::one()));
        let c = padic_from_rational(&rat(9, 10), &p(5), 3).unwrap();
        assert_eq!(c.val(), Some(-1));
        // 9/10 ≡ 5^-1 · unit  ⇔  9/2 ≡ unit mod 125.
        assert_eq!((c.unit() * 2u32 - 9u32).mod_floor(&BigInt::from(125)), BigInt::zero());
        assert_eq!(padic_from_rational(&int(1), &p(2), 0), Err(Error::ZeroPrecision));
        assert!(padic_from_rational(&int(0), &p(3), 5).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let a = padic_from_rational(&int(3), &p(2), 4).unwrap();
        let b = padic_from_rational(&int(3), &p(3), 4).unwrap();
        assert_eq!(a.add(&b), Err(Error::PrimeMismatch));
        assert_eq!(PAdic::zero(p(2), 4).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn cancellation_loses_relative_precision() {
        let a = padic_from_rational(&int(1), &p(3), 4).unwrap();
        let b = padic_from_rational(&int(-1 + 81 * 5), &p(3), 6).unwrap();
        let s = a.add(&b).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.abs_precision(), 4);
        let c = padic_from_rational(&int(10), &p(3), 4).unwrap();
        let d = c.sub(&a).unwrap();
        assert_eq!((d.val(), d.precision()), (Some(2), 2));
    }

    #[test]
    fn geometric_series_identity() {
        for q in [2u64, 3, 5, 7] {
            let pr = p(q);
            for n in 1..=16u32 {
                let k = n as usize;
                let sum: BigInt = (0..k).map(|j| pr.pow(j as u32)).sum();
                let y = padic_from_rational(&BigRational::from_integer(sum), &pr, n).unwrap();
                let f = padic_from_rational(&int(1 - q as i64), &pr, n).unwrap();
                assert!(f.mul(&y).unwrap().congruent_to(&int(1)), "p={q} N={n}");
            }
        }
    }

    fn small_rat() -> impl Strategy<Value = BigRational> {
        (-500i64..500, 1i64..300).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn arithmetic_matches_rationals(q in small_rat(), r in small_rat(), pi in 0usize..3, n in prop::sample::select(vec![1u32, 4, 8])) {
            let pr = [p(2), p(3), p(5)][pi].clone();
            let a = padic_from_rational(&q, &pr, n).unwrap();
            let b = padic_from_rational(&r, &pr, n).unwrap();
            prop_assert!(a.add(&b).unwrap().congruent_to(&(&q + &r)));
            prop_assert!(a.mul(&b).unwrap().congruent_to(&(&q * &r)));
            if !q.is_zero() {
                let inv = a.inv().unwrap();
                prop_assert!(inv.congruent_to(&q.recip()));
                prop_assert!(inv.mul(&a).unwrap().congruent_to(&int(1)));
            }
            prop_assert!(a.add(&PAdic::zero(pr.clone(), n as i64)).unwrap().approx_eq(&a));
        }
    }
}
