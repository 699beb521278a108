//! Constructive weak approximation: a rational close to prescribed values
//! at finitely many places.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::padic::rat_mod;
use super::Place;
use crate::divisor::{crt_solve, Divisor};
use crate::error::{Error, Result};
use crate::prime::val_rat;
use crate::rational::as_string;

/// Approximate `value` at `place` within `eps`: a closed ball
/// `|x − value|_p ≤ eps` at finite places, an open interval at the real one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub place: Place,
    #[serde(with = "as_string")]
    pub value: BigRational,
    #[serde(with = "as_string")]
    pub eps: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxCheck {
    pub place: Place,
    #[serde(with = "as_string")]
    pub target: BigRational,
    #[serde(with = "as_string")]
    pub eps: BigRational,
    #[serde(with = "as_string")]
    pub distance: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxResult {
    #[serde(with = "as_string")]
    pub x: BigRational,
    pub checks: Vec<ApproxCheck>,
}

/// Search limits for [`weak_approx`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ApproxLimits {
    /// Largest prime-power exponent a finite target may require.
    pub max_exponent: u32,
    /// Intervals examined while looking for an admissible denominator.
    pub max_steps: usize,
}

impl Default for ApproxLimits {
    fn default() -> ApproxLimits {
        ApproxLimits { max_exponent: 4096, max_steps: 100_000 }
    }
}

impl Target {
    pub fn new(place: Place, value: BigRational, eps: BigRational) -> Target {
        Target { place, value, eps }
    }

    pub fn check(&self, x: &BigRational) -> ApproxCheck {
        let distance = self.place.abs(&(x - &self.value));
        let pass = match self.place {
            Place::Real => distance < self.eps,
            Place::Finite(_) => distance <= self.eps,
        };
        ApproxCheck { place: self.place.clone(), target: self.value.clone(), eps: self.eps.clone(), distance, pass }
    }
}

/// Same tolerance at every place.
pub fn weak_approx(targets: &[(Place, BigRational)], eps: &BigRational) -> Result<ApproxResult> {
    let ts: Vec<Target> = targets.iter().map(|(v, a)| Target::new(v.clone(), a.clone(), eps.clone())).collect();
    weak_approx_targets(&ts, &ApproxLimits::default())
}

/// Finds `x = y / (D·m)`: `D` clears the target denominators at the listed
/// primes, `y` is fixed by CRT modulo `M = ∏ p^K`, and `m` (prime to every
/// listed prime) is the smallest denominator that moves `x` into the real
/// window. Ties go to the smallest nonnegative `y`.
pub fn weak_approx_targets(targets: &[Target], limits: &ApproxLimits) -> Result<ApproxResult> {
    if targets.is_empty() {
        return Err(Error::Invalid("no targets".into()));
    }
    for (i, t) in targets.iter().enumerate() {
        if !t.eps.is_positive() {
            return Err(Error::Invalid("eps must be positive".into()));
        }
        if targets[..i].iter().any(|s| s.place == t.place) {
            return Err(Error::Invalid(format!("place {} listed twice", t.place)));
        }
    }
    let x = if targets.iter().all(|t| t.value == targets[0].value) {
        targets[0].value.clone()
    } else {
        solve(targets, limits)?
    };
    let checks = targets.iter().map(|t| t.check(&x)).collect();
    Ok(ApproxResult { x, checks })
}

fn solve(targets: &[Target], limits: &ApproxLimits) -> Result<BigRational> {
    let mut d = BigInt::one();
    let mut parts = Vec::new();
    for t in targets {
        let Place::Finite(p) = &t.place else { continue };
        let pb = BigRational::from_integer(p.to_bigint());
        let mut k = 0u32;
        let mut ball = BigRational::one();
        while ball > t.eps {
            k += 1;
            if k > limits.max_exponent {
                return Err(Error::InfeasiblePrecision);
            }
            ball /= &pb;
        }
        let dp = if t.value.is_zero() { 0 } else { (-val_rat(&t.value, p)).max(0) as u32 };
        d *= p.pow(dp);
        parts.push((p.clone(), k + dp, t));
    }
    let dq = BigRational::from_integer(d.clone());
    let mut congruences = Vec::new();
    let mut modulus = BigInt::one();
    for (p, k, t) in &parts {
        let m = p.pow(*k);
        let r = rat_mod(&(&dq * &t.value), &m).expect("cleared denominator");
        congruences.push((r, Divisor::prime_power(p.clone(), *k as i64).try_into().expect("integral")));
        modulus *= m;
    }
    let b = crt_solve(&congruences)?;
    let Some(real) = targets.iter().find(|t| t.place == Place::Real) else {
        return Ok(BigRational::new(b, d));
    };
    let big_m = BigRational::from_integer(modulus.clone());
    let bq = BigRational::from_integer(b.clone());
    let lo = (&dq * (&real.value - &real.eps) - &bq) / &big_m;
    let hi = (&dq * (&real.value + &real.eps) - &bq) / &big_m;
    let primes: Vec<BigInt> = parts.iter().map(|(p, _, _)| p.to_bigint()).collect();
    let m = smallest_denominator(&lo, &hi, &primes, limits.max_steps)?;
    let mq = BigRational::from_integer(m.clone());
    let t_min = (&lo * &mq).floor().to_integer() + 1;
    let t_max = (&hi * &mq).ceil().to_integer() - 1;
    let mb = &m * &b;
    // Smallest t with m·b + M·t ≥ 0.
    let t_nonneg = (-&mb).div_ceil(&modulus);
    let t = if t_nonneg > t_max { t_max } else { t_nonneg.max(t_min) };
    let y = mb + modulus * t;
    Ok(BigRational::new(y, d * m))
}

/// The smallest `m ≥ 1`, prime to every entry of `primes`, such that some
/// `t/m` lies in the open interval `(lo, hi)`.
fn smallest_denominator(lo: &BigRational, hi: &BigRational, primes: &[BigInt], max_steps: usize) -> Result<BigInt> {
    let admissible = |m: &BigInt| primes.iter().all(|p| !(m % p).is_zero());
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<_>, seq: &mut u64, lo: BigRational, hi: BigRational| {
        let f = simplest_between(&lo, &hi);
        heap.push((Reverse(f.denom().clone()), Reverse(*seq), lo, hi, f));
        *seq += 1;
    };
    let mut seq = 0u64;
    push(&mut heap, &mut seq, lo.clone(), hi.clone());
    for _ in 0..max_steps {
        let Some((Reverse(m), _, lo, hi, f)) = heap.pop() else { break };
        if admissible(&m) {
            return Ok(m);
        }
        push(&mut heap, &mut seq, lo, f.clone());
        push(&mut heap, &mut seq, f, hi);
    }
    Err(Error::InfeasiblePrecision)
}

/// The rational of least denominator (then least absolute numerator) in the
/// open interval `(lo, hi)`, `lo < hi`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo < hi);
    if lo.is_negative() && hi.is_positive() {
        return BigRational::zero();
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi, &-lo);
    }
    simplest_above(lo, Some(hi))
}

/// Continued-fraction descent for `0 ≤ lo < hi ≤ ∞`.
fn simplest_above(lo: &BigRational, hi: Option<&BigRational>) -> BigRational {
    let fl = lo.floor();
    let next = &fl + BigRational::one();
    match hi {
        Some(h) if next >= *h => {
            // No integer strictly inside: x = fl + 1/y.
            let y_lo = (h - &fl).recip();
            let gap = lo - &fl;
            let y_hi = (!gap.is_zero()).then(|| gap.recip());
            fl + simplest_above(&y_lo, y_hi.as_ref()).recip()
        }
        _ => next,
    }
}
