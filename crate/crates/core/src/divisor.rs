//! Weil divisors of the integers and fractional-ideal arithmetic on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::prime::{factor_biguint, Prime};

/// Finitely supported map from primes to integer exponents.
///
/// Entries are kept sorted by prime with no zero exponents, so structural
/// equality is divisor equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    entries: Entries,
}

type Entries = SmallVec<[(Prime, i64); 4]>;

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn new<I: IntoIterator<Item = (Prime, i64)>>(entries: I) -> Divisor {
        let mut map: BTreeMap<Prime, i64> = BTreeMap::new();
        for (p, e) in entries {
            *map.entry(p).or_insert(0) += e;
        }
        Divisor {
            entries: map.into_iter().filter(|(_, e)| *e != 0).collect(),
        }
    }

    /// The divisor `{p: e}`.
    pub fn prime_power(p: Prime, e: i64) -> Divisor {
        Divisor::new([(p, e)])
    }

    pub(crate) fn from_sorted(entries: Vec<(Prime, i64)>) -> Divisor {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, e)| *e != 0));
        Divisor { entries: entries.into() }
    }

    pub fn exponent(&self, p: &Prime) -> i64 {
        match self.entries.binary_search_by(|(q, _)| q.cmp(p)) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Prime, i64)> + '_ {
        self.entries.iter().map(|(p, e)| (p, *e))
    }

    pub fn support(&self) -> impl Iterator<Item = &Prime> + '_ {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|(_, e)| *e >= 0)
    }

    /// The positive rational `∏ p^e`.
    pub fn value(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.entries {
            if *e > 0 {
                num *= p.pow(*e as u32);
            } else {
                den *= p.pow((-*e) as u32);
            }
        }
        BigRational::new(num, den)
    }

    fn merge(&self, other: &Divisor, f: impl Fn(i64, i64) -> i64) -> Divisor {
        let mut out = Entries::new();
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (p, e) = match (a.get(i), b.get(j)) {
                (Some((p, x)), Some((q, y))) => match p.cmp(q) {
                    Ordering::Less => {
                        i += 1;
                        (p, f(*x, 0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (q, f(0, *y))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (p, f(*x, *y))
                    }
                },
                (Some((p, x)), None) => {
                    i += 1;
                    (p, f(*x, 0))
                }
                (None, Some((q, y))) => {
                    j += 1;
                    (q, f(0, *y))
                }
                (None, None) => unreachable!(),
            };
            if e != 0 {
                out.push((p.clone(), e));
            }
        }
        Divisor { entries: out }
    }

    /// Pointwise `≤` with absent exponents read as 0.
    pub fn le(&self, other: &Divisor) -> bool {
        self.merge(other, |x, y| if x <= y { 0 } else { 1 }).is_zero()
    }

    pub fn scale(&self, n: i64) -> Divisor {
        if n == 0 {
            return Divisor::zero();
        }
        Divisor {
            entries: self.entries.iter().map(|(p, e)| (p.clone(), e * n)).collect(),
        }
    }
}

/// `div(q)` for a nonzero rational; the sign is discarded.
pub fn factor_rational(q: &BigRational) -> Result<Divisor> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let num = factor_biguint(q.numer().magnitude());
    let den = factor_biguint(q.denom().magnitude());
    Ok(Divisor::new(
        num.into_iter()
            .map(|(p, e)| (p, e as i64))
            .chain(den.into_iter().map(|(p, e)| (p, -(e as i64)))),
    ))
}

/// `div(n)` for a nonzero integer.
pub fn factor_int(n: &BigInt) -> Result<Divisor> {
    factor_rational(&BigRational::from_integer(n.clone()))
}

/// Divisor of `gcd`, i.e. of `I + J`: exponentwise minimum.
pub fn ideal_sum(a: &Divisor, b: &Divisor) -> Divisor {
    a.merge(b, i64::min)
}

/// Divisor of `lcm`, i.e. of `I ∩ J`: exponentwise maximum.
pub fn ideal_intersect(a: &Divisor, b: &Divisor) -> Divisor {
    a.merge(b, i64::max)
}

pub fn ideal_product(a: &Divisor, b: &Divisor) -> Divisor {
    a.merge(b, |x, y| x + y)
}

pub fn ideal_invert(a: &Divisor) -> Divisor {
    a.scale(-1)
}

/// A divisor with nonnegative exponents.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct IntegralDivisor(Divisor);

impl IntegralDivisor {
    pub fn as_divisor(&self) -> &Divisor {
        &self.0
    }

    pub fn into_divisor(self) -> Divisor {
        self.0
    }

    /// The positive integer `∏ p^e`.
    pub fn value(&self) -> BigInt {
        self.0.value().to_integer()
    }
}

impl TryFrom<Divisor> for IntegralDivisor {
    type Error = Error;
    fn try_from(d: Divisor) -> Result<IntegralDivisor> {
        if d.is_integral() {
            Ok(IntegralDivisor(d))
        } else {
            Err(Error::NonIntegral)
        }
    }
}

impl<'de> Deserialize<'de> for IntegralDivisor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        IntegralDivisor::try_from(Divisor::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// All exponents clamped to 1.
pub fn radical(a: &IntegralDivisor) -> IntegralDivisor {
    IntegralDivisor(Divisor {
        entries: a.0.entries.iter().map(|(p, _)| (p.clone(), 1)).collect(),
    })
}

/// `a | b` as ideals of the integers (pointwise exponent order).
pub fn divides(a: &IntegralDivisor, b: &IntegralDivisor) -> bool {
    a.0.le(&b.0)
}

/// Solves `x ≡ r_i mod p_i^{e_i}` for distinct primes; `0 ≤ x < ∏ p_i^{e_i}`.
pub fn crt_solve(congruences: &[(BigInt, IntegralDivisor)]) -> Result<BigInt> {
    let mut seen: Vec<&Prime> = Vec::new();
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in congruences {
        if m.0.len() > 1 {
            return Err(Error::Invalid("modulus must be a prime power".into()));
        }
        if let Some(p) = m.0.support().next() {
            if seen.contains(&p) {
                return Err(Error::NonCoprimeModuli);
            }
            seen.push(p);
        }
        let mi = m.value();
        let inv = mod_inverse(&modulus, &mi).ok_or(Error::NonCoprimeModuli)?;
        let t = ((r - &x) * inv).mod_floor(&mi);
        x += &modulus * t;
        modulus *= mi;
    }
    Ok(x.mod_floor(&modulus))
}

/// Inverse of `a` modulo `m > 0`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}:{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.entries.len()))?;
        for (p, e) in &self.entries {
            m.serialize_entry(&p.to_string(), e)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Divisor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Divisor, D::Error> {
        let raw: BTreeMap<String, i64> = BTreeMap::deserialize(d)?;
        let mut entries = Vec::with_capacity(raw.len());
        for (k, e) in raw {
            let p: Prime = k.parse().map_err(D::Error::custom)?;
            entries.push((p, e));
        }
        Ok(Divisor::new(entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::p;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(d: Divisor) -> IntegralDivisor {
        d.try_into().unwrap()
    }

    #[test]
    fn factor_examples() {
        let d = factor_rational(&rat(12, 1)).unwrap();
        assert_eq!(d, Divisor::new([(p(2), 2), (p(3), 1)]));
        let d = factor_rational(&rat(9, 10)).unwrap();
        assert_eq!(d, Divisor::new([(p(2), -1), (p(3), 2), (p(5), -1)]));
        assert_eq!(factor_rational(&rat(-1, 1)).unwrap(), Divisor::zero());
        assert_eq!(factor_rational(&rat(0, 1)), Err(Error::ZeroInput));
    }

    #[test]
    fn sum_and_intersect_examples() {
        let a = factor_rational(&rat(12, 1)).unwrap();
        let b = factor_rational(&rat(18, 1)).unwrap();
        assert_eq!(ideal_sum(&a, &b).value(), rat(6, 1));
        assert_eq!(ideal_intersect(&a, &b).value(), rat(36, 1));
        let h = factor_rational(&rat(1, 2)).unwrap();
        assert_eq!(ideal_product(&h, &ideal_invert(&h)), Divisor::zero());
    }

    #[test]
    fn radical_and_divides() {
        let a = int(factor_rational(&rat(72, 1)).unwrap());
        assert_eq!(radical(&a).value(), BigInt::from(6));
        let b = int(factor_rational(&rat(144, 1)).unwrap());
        assert!(divides(&a, &b));
        assert!(!divides(&b, &a));
        let bad = factor_rational(&rat(1, 2)).unwrap();
        assert_eq!(IntegralDivisor::try_from(bad), Err(Error::NonIntegral));
    }

    #[test]
    fn crt_examples() {
        let m = |q: u64, e: i64| int(Divisor::prime_power(p(q), e));
        let x = crt_solve(&[(1.into(), m(2, 1)), (2.into(), m(3, 1))]).unwrap();
        assert_eq!(x, BigInt::from(5));
        let x = crt_solve(&[(3.into(), m(2, 3)), (4.into(), m(5, 1))]).unwrap();
        assert_eq!(x, BigInt::from(19));
        let x = crt_solve(&[(1.into(), m(2, 3)), (2.into(), m(3, 3))]).unwrap();
        assert_eq!(x, BigInt::from(137));
        assert_eq!(
            crt_solve(&[(1.into(), m(2, 1)), (0.into(), m(2, 2))]),
            Err(Error::NonCoprimeModuli)
        );
    }

    #[test]
    fn json_roundtrip() {
        let d = Divisor::new([(p(2), 2), (p(3), -1)]);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"2":2,"3":-1}"#);
        assert_eq!(serde_json::from_str::<Divisor>(&s).unwrap(), d);
        assert!(serde_json::from_str::<Divisor>(r#"{"4":1}"#).is_err());
    }

    fn small_divisor() -> impl Strategy<Value = Divisor> {
        prop::collection::vec((0usize..6, -4i64..5), 0..5).prop_map(|v| {
            Divisor::new(v.into_iter().map(|(i, e)| (crate::prime::nth_prime(i), e)))
        })
    }

    proptest! {
        #[test]
        fn lattice_laws(a in small_divisor(), b in small_divisor(), c in small_divisor()) {
            prop_assert_eq!(ideal_sum(&a, &b), ideal_sum(&b, &a));
            prop_assert_eq!(ideal_intersect(&a, &b), ideal_intersect(&b, &a));
            prop_assert_eq!(ideal_sum(&a, &ideal_intersect(&a, &b)), a.clone());
            prop_assert_eq!(ideal_intersect(&a, &ideal_sum(&a, &b)), a.clone());
            prop_assert_eq!(
                ideal_product(&a, &ideal_sum(&b, &c)),
                ideal_sum(&ideal_product(&a, &b), &ideal_product(&a, &c))
            );
            prop_assert_eq!(ideal_product(&a, &ideal_invert(&a)), Divisor::zero());
            prop_assert_eq!(ideal_product(&ideal_sum(&a, &b), &ideal_intersect(&a, &b)), ideal_product(&a, &b));
        }

        #[test]
        fn factor_is_multiplicative(x in 1i64..100_000, y in 1i64..100_000, s in -50i64..50) {
            prop_assume!(s != 0);
            let q = rat(x, y);
            let r = rat(s, 1);
            prop_assert_eq!(
                factor_rational(&(&q * &r)).unwrap(),
                ideal_product(&factor_rational(&q).unwrap(), &factor_rational(&r).unwrap())
            );
            prop_assert_eq!(factor_rational(&q).unwrap().value(), q.abs());
        }

        #[test]
        fn crt_satisfies_all(r2 in 0i64..1000, r3 in 0i64..1000, r7 in -1000i64..1000, e in 1i64..6) {
            let mods = [(2u64, e), (3, e + 1), (7, 2)];
            let rs = [r2, r3, r7];
            let cs: Vec<_> = mods.iter().zip(rs)
                .map(|(&(q, e), r)| (BigInt::from(r), int(Divisor::prime_power(p(q), e))))
                .collect();
            let x = crt_solve(&cs).unwrap();
            let total: BigInt = cs.iter().map(|(_, m)| m.value()).product();
            prop_assert!(x >= BigInt::zero() && x < total);
            for (r, m) in &cs {
                prop_assert_eq!((&x - r).mod_floor(&m.value()), BigInt::zero());
            }
        }
    }
}
