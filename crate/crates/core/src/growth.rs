//! Exponential-polynomial normal forms `Σ c · b^i · i^k (+ c · prime(i))`
//! and their eventual behaviour as `i → ∞`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::prime::{nth_prime, val_rat, Prime};
use crate::Decision;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// `b^i · i^k`, `b ≠ 0`.
    Exp { base: BigRational, degree: u32 },
    /// The `i`-th prime, 0-based.
    Prime,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExpPoly {
    terms: BTreeMap<Term, BigRational>,
}

/// Behaviour of a real sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealGrowth {
    Zero,
    Vanishing,
    /// Converges to a nonzero limit.
    Converges(BigRational),
    /// Bounded, bounded away from zero, no limit.
    Oscillating,
    Unbounded,
    Undecidable,
}

/// Behaviour of a sequence in a `p`-adic completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PadicGrowth {
    Zero,
    Infinitesimal,
    /// Converges to a nonzero rational limit.
    Nearstandard(BigRational),
    /// Bounded without a limit.
    Finite,
    Unbounded,
    Undecidable,
}

impl ExpPoly {
    pub fn zero() -> ExpPoly {
        ExpPoly::default()
    }

    pub fn term(t: Term, c: BigRational) -> ExpPoly {
        let mut e = ExpPoly::zero();
        e.push(t, c);
        e
    }

    pub fn constant(c: BigRational) -> ExpPoly {
        ExpPoly::term(Term::Exp { base: BigRational::one(), degree: 0 }, c)
    }

    /// `c · b^i · i^k`; a zero base gives the zero sequence from index 1 on.
    pub fn exp(c: BigRational, base: BigRational, degree: u32) -> ExpPoly {
        if base.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly::term(Term::Exp { base, degree }, c)
    }

    fn push(&mut self, t: Term, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(t.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.push(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (t, c) in &self.terms {
            out.push(t.clone(), c * s);
        }
        out
    }

    pub fn neg(&self) -> ExpPoly {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        self.add(&other.neg())
    }

    /// Product; `None` when a prime term meets anything but a constant.
    pub fn mul(&self, other: &ExpPoly) -> Option<ExpPoly> {
        let mut out = ExpPoly::zero();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let term = match (s, t) {
                    (Term::Exp { base: x, degree: j }, Term::Exp { base: y, degree: k }) => {
                        Term::Exp { base: x * y, degree: j + k }
                    }
                    (Term::Prime, Term::Exp { base, degree: 0 }) | (Term::Exp { base, degree: 0 }, Term::Prime)
                        if base.is_one() =>
                    {
                        Term::Prime
                    }
                    _ => return None,
                };
                out.push(term, a * b);
            }
        }
        Some(out)
    }

    pub fn eval(&self, i: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for (t, c) in &self.terms {
            acc += match t {
                Term::Exp { base, degree } => {
                    c * num_traits::pow(base.clone(), i) * BigRational::from_integer(num_traits::pow(i.into(), *degree as usize))
                }
                Term::Prime => c * BigRational::from_integer(nth_prime(i).to_bigint()),
            };
        }
        acc
    }

    /// Terms of maximal real growth rank.
    fn dominant(&self) -> Vec<(&Term, &BigRational)> {
        let rank = |t: &Term| match t {
            Term::Exp { base, degree } => (base.abs(), 2 * degree),
            Term::Prime => (BigRational::one(), 3),
        };
        let top = self.terms.keys().map(rank).max();
        match top {
            None => Vec::new(),
            Some(r) => self.terms.iter().filter(|(t, _)| rank(t) == r).collect(),
        }
    }

    /// Sign of the sequence for all large `i`.
    pub fn eventual_sign(&self) -> Decision<Ordering> {
        let dom = self.dominant();
        let sign = |c: &BigRational| if c.is_positive() { Ordering::Greater } else { Ordering::Less };
        match dom.as_slice() {
            [] => Decision::Decided(Ordering::Equal),
            [(Term::Prime, c)] => Decision::Decided(sign(c)),
            [(Term::Exp { base, .. }, c)] => {
                if base.is_positive() {
                    Decision::Decided(sign(c))
                } else {
                    Decision::Undecidable
                }
            }
            [(_, c1), (_, c2)] => {
                // b^i·i^k·(c₊ + c₋·(−1)^i) with c₊ the coefficient of the positive base.
                let even = *c1 + *c2;
                let odd = *c2 - *c1;
                if even.is_zero() || odd.is_zero() || even.is_positive() != odd.is_positive() {
                    Decision::Undecidable
                } else {
                    Decision::Decided(sign(&even))
                }
            }
            _ => unreachable!("at most two terms share a growth rank"),
        }
    }

    pub fn real_growth(&self) -> RealGrowth {
        let dom = self.dominant();
        let Some((t, _)) = dom.first() else {
            return RealGrowth::Zero;
        };
        let (mag, level) = match t {
            Term::Exp { base, degree } => (base.abs(), 2 * degree),
            Term::Prime => (BigRational::one(), 3),
        };
        let unit = BigRational::one();
        if mag < unit {
            return RealGrowth::Vanishing;
        }
        let above = mag > unit || level > 0;
        match dom.as_slice() {
            [(_, _)] if above => RealGrowth::Unbounded,
            [(Term::Exp { base, .. }, c)] => {
                if base.is_positive() {
                    RealGrowth::Converges((*c).clone())
                } else {
                    RealGrowth::Oscillating
                }
            }
            [(_, c1), (_, c2)] => {
                if (*c1 + *c2).is_zero() || (*c1 - *c2).is_zero() {
                    RealGrowth::Undecidable
                } else if above {
                    RealGrowth::Unbounded
                } else {
                    RealGrowth::Oscillating
                }
            }
            _ => RealGrowth::Undecidable,
        }
    }

    pub fn padic_growth(&self, p: &Prime) -> PadicGrowth {
        if self.is_zero() {
            return PadicGrowth::Zero;
        }
        let mut unbounded: Vec<(i64, &BigRational)> = Vec::new();
        let mut oscillating = false;
        let mut limit = BigRational::zero();
        for (t, c) in &self.terms {
            match t {
                Term::Prime => oscillating = true,
                Term::Exp { base, degree } => {
                    let v = val_rat(base, p);
                    if v < 0 {
                        unbounded.push((v, base));
                    } else if v == 0 {
                        if base.is_one() && *degree == 0 {
                            limit = c.clone();
                        } else {
                            oscillating = true;
                        }
                    }
                }
            }
        }
        if let Some(min) = unbounded.iter().map(|(v, _)| *v).min() {
            let lead: Vec<&BigRational> = unbounded.iter().filter(|(v, _)| *v == min).map(|(_, b)| *b).collect();
            // Opposite bases can cancel on every other index.
            let cancel = lead.iter().any(|a| lead.iter().any(|b| **a == -(*b).clone()));
            return if cancel { PadicGrowth::Undecidable } else { PadicGrowth::Unbounded };
        }
        if oscillating {
            PadicGrowth::Finite
        } else if limit.is_zero() {
            PadicGrowth::Infinitesimal
        } else {
            PadicGrowth::Nearstandard(limit)
        }
    }

    /// Eventual `p`-adic valuation as (coefficient of the index, constant):
    /// `v_p(x_i) = a·i + b` for all large `i`. `None` means `x = 0`.
    pub fn lex_valuation(&self, p: &Prime) -> Decision<Option<(i64, i64)>> {
        if self.is_zero() {
            return Decision::Decided(None);
        }
        let mut vals = Vec::new();
        for (t, c) in &self.terms {
            match t {
                Term::Prime => vals.push((0, val_rat(c, p))),
                Term::Exp { base, degree: 0 } => vals.push((val_rat(base, p), val_rat(c, p))),
                Term::Exp { .. } => return Decision::Undecidable,
            }
        }
        vals.sort();
        if vals.len() > 1 && vals[0] == vals[1] {
            return Decision::Undecidable;
        }
        Decision::Decided(Some(vals[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::p;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn geometric(q: i64) -> ExpPoly {
        // 1 + q + … + q^i
        ExpPoly::exp(rat(q, q - 1), int(q), 0).add(&ExpPoly::constant(rat(-1, q - 1)))
    }

    #[test]
    fn geometric_partial_sums() {
        let g = geometric(3);
        for i in 0..10 {
            let direct: i64 = (0..=i).map(|k| 3i64.pow(k)).sum();
            assert_eq!(g.eval(i as usize), int(direct));
        }
        assert_eq!(g.padic_growth(&p(3)), PadicGrowth::Nearstandard(rat(-1, 2)));
        assert_eq!(g.real_growth(), RealGrowth::Unbounded);
        assert_eq!(g.padic_growth(&p(2)), PadicGrowth::Finite);
    }

    #[test]
    fn power_sequences() {
        let x = ExpPoly::exp(int(1), int(2), 0);
        assert_eq!(x.padic_growth(&p(2)), PadicGrowth::Infinitesimal);
        assert_eq!(x.padic_growth(&p(3)), PadicGrowth::Finite);
        assert_eq!(x.real_growth(), RealGrowth::Unbounded);
        let h = ExpPoly::exp(int(1), rat(1, 2), 0);
        assert_eq!(h.real_growth(), RealGrowth::Vanishing);
        assert_eq!(h.padic_growth(&p(2)), PadicGrowth::Unbounded);
        assert_eq!(x.lex_valuation(&p(2)), Decision::Decided(Some((1, 0))));
    }

    #[test]
    fn alternating_cases() {
        let alt = ExpPoly::exp(int(1), int(-1), 0);
        assert_eq!(alt.real_growth(), RealGrowth::Oscillating);
        assert_eq!(alt.eventual_sign(), Decision::Undecidable);
        // 2^i + (−2)^i vanishes at odd indices.
        let half = ExpPoly::exp(int(1), int(2), 0).add(&ExpPoly::exp(int(1), int(-2), 0));
        assert_eq!(half.real_growth(), RealGrowth::Undecidable);
        assert_eq!(half.padic_growth(&p(3)), PadicGrowth::Finite);
        let inv = ExpPoly::exp(int(1), rat(1, 3), 0).add(&ExpPoly::exp(int(1), rat(-1, 3), 0));
        assert_eq!(inv.padic_growth(&p(3)), PadicGrowth::Undecidable);
        // 3·2^i + (−2)^i is 4·2^i or 2·2^i.
        let pos = ExpPoly::exp(int(3), int(2), 0).add(&ExpPoly::exp(int(1), int(-2), 0));
        assert_eq!(pos.eventual_sign(), Decision::Decided(Ordering::Greater));
    }

    #[test]
    fn prime_terms() {
        let pr = ExpPoly::term(Term::Prime, int(1));
        assert_eq!(pr.eval(3), int(7));
        let x = pr.sub(&ExpPoly::exp(int(1), int(1), 2));
        assert_eq!(x.eventual_sign(), Decision::Decided(Ordering::Less));
        let y = pr.sub(&ExpPoly::exp(int(100), int(1), 1));
        assert_eq!(y.eventual_sign(), Decision::Decided(Ordering::Greater));
        assert_eq!(pr.padic_growth(&p(5)), PadicGrowth::Finite);
        assert!(pr.mul(&pr).is_none());
    }

    fn small_poly() -> impl Strategy<Value = ExpPoly> {
        let term = (-3i64..4, prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), 1i64..3, 0u32..2);
        prop::collection::vec(term, 0..4).prop_map(|ts| {
            ts.into_iter().fold(ExpPoly::zero(), |acc, (c, b, d, k)| acc.add(&ExpPoly::exp(int(c), rat(b, d), k)))
        })
    }

    proptest! {
        #[test]
        fn eventual_sign_holds_late(x in small_poly()) {
            if let Decision::Decided(s) = x.eventual_sign() {
                for i in 60..64 {
                    prop_assert_eq!(x.eval(i).cmp(&BigRational::zero()), s);
                }
            }
        }

        #[test]
        fn lex_valuation_holds_late(x in small_poly(), q in prop::sample::select(vec![2u64, 3, 5])) {
            let q = p(q);
            if let Decision::Decided(Some((a, b))) = x.lex_valuation(&q) {
                for i in 40..44usize {
                    prop_assert_eq!(val_rat(&x.eval(i), &q), a * i as i64 + b);
                }
            }
        }

        #[test]
        fn arithmetic_is_pointwise(x in small_poly(), y in small_poly(), i in 0usize..12) {
            prop_assert_eq!(x.add(&y).eval(i), x.eval(i) + y.eval(i));
            if let Some(z) = x.mul(&y) {
                prop_assert_eq!(z.eval(i.max(1)), x.eval(i.max(1)) * y.eval(i.max(1)));
            }
        }
    }
}
