//! Prime labels, primality and integer factorization.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational prime. Values up to `u64::MAX` are stored inline.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(Repr);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Small(u64),
    Big(Arc<BigUint>),
}

impl Prime {
    pub fn new(n: u64) -> Result<Prime> {
        if is_prime_u64(n) {
            Ok(Prime(Repr::Small(n)))
        } else {
            Err(Error::NotPrime(n.to_string()))
        }
    }

    pub fn from_biguint(n: &BigUint) -> Result<Prime> {
        if is_prime_big(n) {
            Ok(Prime::trusted(n.clone()))
        } else {
            Err(Error::NotPrime(n.to_string()))
        }
    }

    /// Caller guarantees primality.
    pub(crate) fn trusted(n: BigUint) -> Prime {
        match n.to_u64() {
            Some(s) => Prime(Repr::Small(s)),
            None => Prime(Repr::Big(Arc::new(n))),
        }
    }

    pub(crate) fn trusted_u64(n: u64) -> Prime {
        debug_assert!(is_prime_u64(n));
        Prime(Repr::Small(n))
    }

    pub fn as_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(s) => Some(*s),
            Repr::Big(_) => None,
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Small(s) => BigUint::from(*s),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.to_biguint())
    }

    /// `p^e` as a big integer.
    pub fn pow(&self, e: u32) -> BigInt {
        num_traits::pow(self.to_bigint(), e as usize)
    }

    /// Position in the increasing enumeration of all primes, starting at 0.
    pub fn index(&self) -> Option<usize> {
        let p = self.as_u64()?;
        let table = small_primes();
        match table.binary_search(&p) {
            Ok(i) => Some(i),
            Err(_) => {
                let mut i = table.len();
                let mut q = *table.last().unwrap();
                while q < p {
                    q = next_prime_after(q);
                    i += 1;
                }
                Some(i - 1)
            }
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(s) => write!(f, "{s}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Prime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Prime> {
        let n: BigUint = s
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("not a prime label: {s}")))?;
        Prime::from_biguint(&n)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Small(v) => s.serialize_u64(*v),
            Repr::Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Prime, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Prime;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a prime as a number or decimal string")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Prime, E> {
                Prime::new(v).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Prime, E> {
                u64::try_from(v)
                    .map_err(|_| E::custom("negative prime"))
                    .and_then(|v| Prime::new(v).map_err(E::custom))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Prime, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

const SIEVE_LIMIT: usize = 1 << 21;

/// All primes below 2^21.
pub fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT];
        let mut out = Vec::new();
        for i in 2..SIEVE_LIMIT {
            if !composite[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j < SIEVE_LIMIT {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// The prime at 0-based position `i` (0 ↦ 2, 3 ↦ 7).
pub fn nth_prime(i: usize) -> Prime {
    let table = small_primes();
    if i < table.len() {
        return Prime::trusted_u64(table[i]);
    }
    let mut q = *table.last().unwrap();
    for _ in table.len()..=i {
        q = next_prime_after(q);
    }
    Prime::trusted_u64(q)
}

/// The first `n` primes.
pub fn first_primes(n: usize) -> Vec<Prime> {
    (0..n).map(nth_prime).collect()
}

fn next_prime_after(mut q: u64) -> u64 {
    loop {
        q += 1;
        if is_prime_u64(q) {
            return q;
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = x.modpow(&BigUint::from(2u32), n);
        if x == nm1 {
            return true;
        }
    }
    false
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&BigInt::from(4)) == three && n.mod_floor(&BigInt::from(4)) == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    let nn = BigInt::from(n.clone());
    if n.sqrt().pow(2) == *n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &nn) {
            -1 => break,
            0 => {
                if d.magnitude() != n {
                    return false;
                }
            }
            _ => {}
        }
        d = if d.sign() == Sign::Plus {
            -(d + BigInt::from(2))
        } else {
            -(d - BigInt::from(2))
        };
    }
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4u32;
    let half = |x: BigInt| -> BigInt {
        let x = if x.is_odd() { x + &nn } else { x };
        (x >> 1usize).mod_floor(&nn)
    };
    let k: BigInt = BigInt::from(n.clone()) + 1u32;
    let s = k.trailing_zeros().unwrap_or(0);
    let odd = &k >> s;
    let bits = odd.bits();
    let (mut u, mut v, mut qk) = (BigInt::one(), p.clone(), q.mod_floor(&nn));
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&nn);
        v = (&v * &v - &qk * 2u32).mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if odd.bit(i) {
            let nu = half(&p * &u + &v);
            let nv = half(&d * &u + &p * &v);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&nn);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2u32).mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Primality for arbitrary size. Exact below 3.3·10^24; Baillie–PSW above.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(s) = n.to_u64() {
        return is_prime_u64(s);
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let bound: BigUint = "3317044064679887385961981".parse().unwrap();
    if *n < bound {
        return [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]
            .iter()
            .all(|&a| strong_probable_prime(n, &BigUint::from(a)));
    }
    strong_probable_prime(n, &BigUint::from(2u32)) && strong_lucas(n)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Pollard–Brent; `n` is odd and composite.
fn rho_u64(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = 2u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = rho_u64(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Prime factorization of a positive 64-bit integer, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor_u64 of zero");
    let mut raw = Vec::new();
    for &p in small_primes().iter().take(168) {
        if p * p > n {
            break;
        }
        while n % p == 0 {
            raw.push(p);
            n /= p;
        }
    }
    factor_u64_into(n, &mut raw);
    collect_powers(raw)
}

fn collect_powers<T: Ord + Clone>(mut raw: Vec<T>) -> Vec<(T, u32)> {
    raw.sort();
    let mut out: Vec<(T, u32)> = Vec::new();
    for p in raw {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut g = one.clone();
        while g == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            g = diff.gcd(n);
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn factor_big_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(s) = n.to_u64() {
        out.extend(factor_u64(s).into_iter().flat_map(|(p, e)| {
            std::iter::repeat(BigUint::from(p)).take(e as usize)
        }));
        return;
    }
    if is_prime_big(&n) {
        out.push(n);
        return;
    }
    let d = rho_big(&n);
    let rest = &n / &d;
    factor_big_into(d, out);
    factor_big_into(rest, out);
}

/// Prime factorization of a positive integer, ascending.
pub fn factor_biguint(n: &BigUint) -> Vec<(Prime, u32)> {
    assert!(!n.is_zero(), "factor of zero");
    if let Some(s) = n.to_u64() {
        return factor_u64(s)
            .into_iter()
            .map(|(p, e)| (Prime::trusted_u64(p), e))
            .collect();
    }
    let mut m = n.clone();
    let mut raw = Vec::new();
    for &p in small_primes().iter().take(1000) {
        while (&m % p).is_zero() {
            raw.push(BigUint::from(p));
            m /= p;
        }
    }
    factor_big_into(m, &mut raw);
    collect_powers(raw)
        .into_iter()
        .map(|(p, e)| (Prime::trusted(p), e))
        .collect()
}

/// `p`-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: &Prime) -> i64 {
    debug_assert!(!n.is_zero());
    if let Some(q) = p.as_u64() {
        if let Some(mut m) = n.magnitude().to_u64() {
            let mut v = 0;
            while m % q == 0 {
                m /= q;
                v += 1;
            }
            return v;
        }
    }
    let pb = p.to_bigint();
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (d, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = d;
        v += 1;
    }
}

/// `p`-adic valuation of a nonzero rational.
pub fn val_rat(q: &BigRational, p: &Prime) -> i64 {
    val_int(q.numer(), p) - val_int(q.denom(), p)
}

/// Remove all factors of `p`, returning the cofactor and the exponent.
pub fn split_power(n: &BigInt, p: &Prime) -> (BigInt, i64) {
    let v = val_int(n, p);
    (n / p.pow(v as u32), v)
}

impl PartialEq<u64> for Prime {
    fn eq(&self, other: &u64) -> bool {
        self.as_u64() == Some(*other)
    }
}

impl PartialOrd<u64> for Prime {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(match self.as_u64() {
            Some(s) => s.cmp(other),
            None => Ordering::Greater,
        })
    }
}

/// Shorthand for tests and examples; panics on non-primes.
pub fn p(n: u64) -> Prime {
    Prime::new(n).expect("prime literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn sieve_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), naive_prime(n), "{n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        for n in [2047u64, 1373653, 25326001, 3215031751, 2152302898747, 3825123056546413051] {
            assert!(!is_prime_u64(n));
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_primes() {
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime_big(&m127));
        let m128 = (BigUint::one() << 128) - 1u32;
        assert!(!is_prime_big(&m128));
        let carmichael_like: BigUint = "318665857834031151167461".parse().unwrap();
        assert!(!is_prime_big(&carmichael_like));
        let two64p13 = (BigUint::one() << 64) + 13u32;
        assert!(is_prime_big(&two64p13));
        let m89 = (BigUint::one() << 89) - 1u32;
        let m107 = (BigUint::one() << 107) - 1u32;
        assert!(!is_prime_big(&(&m89 * &m107)));
        assert!(strong_lucas(&m127));
        assert!(!strong_lucas(&(&m89 * &m107)));
    }

    #[test]
    fn lucas_agrees_with_trial_division_on_odd_numbers() {
        for n in (3u64..5000).step_by(2) {
            assert_eq!(strong_lucas(&BigUint::from(n)), naive_prime(n), "{n}");
        }
    }

    #[test]
    fn nth_prime_and_index() {
        assert_eq!(nth_prime(0), 2);
        assert_eq!(nth_prime(3), 7);
        assert_eq!(p(7).index(), Some(3));
        let n = small_primes().len();
        let q = nth_prime(n + 2);
        assert_eq!(q.index(), Some(n + 2));
    }

    #[test]
    fn factor_large() {
        // (2^61 − 1) · 1000003 · 1000033, above the 64-bit range
        let m61 = (BigUint::one() << 61) - 1u32;
        let n = &m61 * 1000003u32 * 1000033u32;
        let f = factor_biguint(&n);
        assert_eq!(f.len(), 3);
        assert_eq!(f[2].0.to_biguint(), m61);
        let prod: BigUint = f.iter().map(|(p, e)| p.to_biguint().pow(*e)).product();
        assert_eq!(prod, n);
    }

    proptest! {
        #[test]
        fn factor_u64_roundtrip(n in 1u64..u64::MAX) {
            let f = factor_u64(n);
            let mut prod = 1u128;
            for w in f.windows(2) { prop_assert!(w[0].0 < w[1].0); }
            for (p, e) in f {
                prop_assert!(is_prime_u64(p));
                prod *= (p as u128).pow(e);
            }
            prop_assert_eq!(prod, n as u128);
        }
    }
}
