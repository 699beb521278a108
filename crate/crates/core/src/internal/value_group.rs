//! The value group `(⊕ℤ)/𝓕` of divisor families modulo a filter, its
//! convex subgroups, and prime ideals from (ultrafilter, subgroup) pairs.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::growth::ExpPoly;
use crate::internal::element::IndexedElement;
use crate::internal::index::{IndexFilterSpec, IndexSet};
use crate::prime::{nth_prime, val_rat, Prime};
use crate::rational::int;
use crate::Decision;

/// An integer-valued family on the index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Table(Vec<i64>),
    /// Exponent at the `i`-th prime.
    Divisor(Divisor),
    Closed(IndexedElement),
    /// `value` on `set`, 0 elsewhere.
    Indicator { set: IndexSet, value: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueGroupElement {
    pub family: Family,
    pub modulus: IndexFilterSpec,
}

impl Family {
    pub fn coordinate(&self, i: usize) -> Option<BigRational> {
        match self {
            Family::Table(t) => t.get(i).map(|&x| int(x)),
            Family::Divisor(d) => Some(int(d.exponent(&nth_prime(i)))),
            Family::Closed(x) => x.eval(i),
            Family::Indicator { set, value } => Some(int(if set.contains(i) { *value } else { 0 })),
        }
    }

    /// Closed form agreeing with the family at all large indices.
    fn eventually(&self) -> Option<ExpPoly> {
        match self {
            Family::Table(_) => None,
            Family::Divisor(_) | Family::Indicator { set: IndexSet::Finite(_), .. } => Some(ExpPoly::zero()),
            Family::Indicator { set: IndexSet::Cofinite(_), value } => Some(ExpPoly::constant(int(*value))),
            Family::Closed(x) => x.to_exp_poly(),
        }
    }
}

/// Order in the quotient. On a principal filter with least member `T` the
/// verdict must hold on all of `T`; on the Fréchet filter it must hold
/// eventually.
pub fn value_group_compare(a: &ValueGroupElement, b: &ValueGroupElement) -> Result<Decision<Ordering>> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch);
    }
    match a.modulus.least_member() {
        Some(t) => {
            if t.is_empty() {
                return Err(Error::ImproperFilter);
            }
            let mut verdict = None;
            for i in t {
                let missing = || Error::Invalid(format!("family undefined at index {i}"));
                let x = a.family.coordinate(i).ok_or_else(missing)?;
                let y = b.family.coordinate(i).ok_or_else(missing)?;
                let c = x.cmp(&y);
                if verdict.is_some_and(|v| v != c) {
                    return Ok(Decision::Undecidable);
                }
                verdict = Some(c);
            }
            Ok(Decision::Decided(verdict.unwrap()))
        }
        None => {
            let (Some(x), Some(y)) = (a.family.eventually(), b.family.eventually()) else {
                return Err(Error::Invalid("finite tables cannot be compared modulo the Fréchet filter".into()));
            };
            Ok(x.sub(&y).eventual_sign())
        }
    }
}

/// The class of the constant family `k`, represented on `witness`.
pub fn embed_int(k: i64, modulus: &IndexFilterSpec, witness: &IndexSet) -> Result<ValueGroupElement> {
    if !modulus.contains(witness) {
        return Err(Error::WitnessNotInFilter);
    }
    Ok(ValueGroupElement {
        family: Family::Indicator { set: witness.clone(), value: k },
        modulus: modulus.clone(),
    })
}

/// Ordered groups with explicit convex-subgroup lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderedGroupModel {
    Z,
    /// `ℤ^k` ordered lexicographically, most significant coordinate first.
    LexZ(usize),
}

impl OrderedGroupModel {
    pub fn rank(self) -> usize {
        match self {
            OrderedGroupModel::Z => 1,
            OrderedGroupModel::LexZ(k) => k,
        }
    }
}

/// The lower segment of the last `rank` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvexSubgroup {
    pub group: OrderedGroupModel,
    pub rank: usize,
}

impl ConvexSubgroup {
    pub fn contains(&self, v: &[i64]) -> bool {
        let k = self.group.rank();
        v.len() == k && v[..k - self.rank].iter().all(|&x| x == 0)
    }
}

/// All convex subgroups, smallest first.
pub fn convex_subgroups(g: OrderedGroupModel) -> Vec<ConvexSubgroup> {
    (0..=g.rank()).map(|rank| ConvexSubgroup { group: g, rank }).collect()
}

/// Value of an element of a valued field: `None` is `∞`.
pub type LexValue = Option<Vec<i64>>;

pub fn lex_cmp(a: &LexValue, b: &LexValue) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// Prime ideal of the internal ring: zero, or the set of elements whose
/// value at `prime` exceeds the convex subgroup of the given `level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeIdeal {
    Zero,
    AtPrime { prime: Prime, rank: usize, level: usize },
}

impl PrimeIdeal {
    pub fn maximal(p: Prime, rank: usize) -> PrimeIdeal {
        PrimeIdeal::AtPrime { prime: p, rank, level: 0 }
    }

    /// `v > u` for every `u` in the level's convex subgroup.
    pub fn contains_value(&self, v: &LexValue) -> bool {
        match (self, v) {
            (_, None) => true,
            (PrimeIdeal::Zero, Some(_)) => false,
            (PrimeIdeal::AtPrime { rank, level, .. }, Some(v)) => {
                let head = &v[..rank - level];
                head.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
            }
        }
    }

    /// Membership of an element of `*ℚ` (rank 2) or `ℚ` (rank 1).
    pub fn contains(&self, x: &IndexedElement) -> Decision<bool> {
        match self {
            PrimeIdeal::Zero => match x.to_exp_poly() {
                Some(e) => Decision::Decided(e.is_zero()),
                None => Decision::Undecidable,
            },
            PrimeIdeal::AtPrime { prime, rank, .. } => match element_value(x, prime, *rank) {
                Decision::Decided(v) => Decision::Decided(self.contains_value(&v)),
                Decision::Undecidable => Decision::Undecidable,
            },
        }
    }

    pub fn is_contained_in(&self, other: &PrimeIdeal) -> bool {
        match (self, other) {
            (PrimeIdeal::Zero, _) => true,
            (_, PrimeIdeal::Zero) => false,
            (
                PrimeIdeal::AtPrime { prime: p, rank: k, level: a },
                PrimeIdeal::AtPrime { prime: q, rank: l, level: b },
            ) => p == q && k == l && a >= b,
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeIdeal::Zero => f.write_str("(0)"),
            PrimeIdeal::AtPrime { prime, level: 0, .. } => write!(f, "m_{prime}"),
            PrimeIdeal::AtPrime { prime, rank: 2, level: 1 } => write!(f, "m_{prime}^inf"),
            PrimeIdeal::AtPrime { prime, rank, level } => write!(f, "p_{prime}[{level}/{rank}]"),
        }
    }
}

/// `p`-adic value of an element: in `ℤ` for standard rationals (rank 1),
/// in `ℤ·ω ⊕ ℤ` ordered lexicographically for families (rank 2).
pub fn element_value(x: &IndexedElement, p: &Prime, rank: usize) -> Decision<LexValue> {
    match rank {
        1 => match x.as_constant() {
            Some(q) if num_traits::Zero::is_zero(&q) => Decision::Decided(None),
            Some(q) => Decision::Decided(Some(vec![val_rat(&q, p)])),
            None => Decision::Undecidable,
        },
        2 => match x.to_exp_poly() {
            Some(e) => e.lex_valuation(p).map(|v| v.map(|(a, b)| vec![a, b])),
            None => Decision::Undecidable,
        },
        _ => Decision::Undecidable,
    }
}

/// The prime ideal `{x : v(x) > U}` at the prime an ultrafilter on the
/// primes is principal at.
pub fn prime_ideal_from_pair(f: &IndexFilterSpec, u: &ConvexSubgroup) -> Result<PrimeIdeal> {
    let i = f.ultra_index().ok_or(Error::NotUltra)?;
    if u.rank >= u.group.rank() {
        return Err(Error::NotProperSubgroup);
    }
    Ok(PrimeIdeal::AtPrime { prime: nth_prime(i), rank: u.group.rank(), level: u.rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::p;
    use crate::rational::rat;

    fn ultra(i: usize) -> IndexFilterSpec {
        IndexFilterSpec::PrincipalUltra { index: i }
    }

    #[test]
    fn embed_via_different_witnesses() {
        let f = ultra(2);
        let a = embed_int(3, &f, &IndexSet::finite([2])).unwrap();
        let b = embed_int(3, &f, &IndexSet::finite([1, 2, 5])).unwrap();
        assert_eq!(value_group_compare(&a, &b).unwrap(), Decision::Decided(Ordering::Equal));
        let c = embed_int(4, &f, &IndexSet::cofinite([0])).unwrap();
        assert_eq!(value_group_compare(&a, &c).unwrap(), Decision::Decided(Ordering::Less));
        assert_eq!(embed_int(3, &f, &IndexSet::finite([1])), Err(Error::WitnessNotInFilter));
        let fr = IndexFilterSpec::Frechet;
        let a = embed_int(3, &fr, &IndexSet::cofinite([])).unwrap();
        let b = embed_int(3, &fr, &IndexSet::cofinite([0, 1])).unwrap();
        assert_eq!(value_group_compare(&a, &b).unwrap(), Decision::Decided(Ordering::Equal));
        assert_eq!(embed_int(3, &fr, &IndexSet::finite([0])), Err(Error::WitnessNotInFilter));
    }

    #[test]
    fn compare_cases() {
        let x = ValueGroupElement { family: Family::Table(vec![1, 5, 2]), modulus: ultra(1) };
        let y = ValueGroupElement { family: Family::Table(vec![3, 4, 2]), modulus: ultra(1) };
        assert_eq!(value_group_compare(&x, &y).unwrap(), Decision::Decided(Ordering::Greater));
        let z = ValueGroupElement { family: Family::Table(vec![3, 4, 2]), modulus: ultra(0) };
        assert_eq!(value_group_compare(&x, &z), Err(Error::ModulusMismatch));
        let wide = IndexFilterSpec::Principal { set: [0, 1].into() };
        let x = ValueGroupElement { family: Family::Table(vec![1, 5]), modulus: wide.clone() };
        let y = ValueGroupElement { family: Family::Table(vec![3, 4]), modulus: wide };
        assert_eq!(value_group_compare(&x, &y).unwrap(), Decision::Undecidable);
        // Divisors are eventually zero; the identity family i ↦ i is infinite.
        let fr = IndexFilterSpec::Frechet;
        let d = ValueGroupElement { family: Family::Divisor(Divisor::prime_power(p(2), 100)), modulus: fr.clone() };
        let w = ValueGroupElement {
            family: Family::Closed(crate::internal::element::ClosedForm::Poly(vec![rat(0, 1), rat(1, 1)]).into()),
            modulus: fr,
        };
        assert_eq!(value_group_compare(&d, &w).unwrap(), Decision::Decided(Ordering::Less));
    }

    #[test]
    fn convex_subgroup_lists() {
        assert_eq!(convex_subgroups(OrderedGroupModel::Z).len(), 2);
        let l = convex_subgroups(OrderedGroupModel::LexZ(2));
        assert_eq!(l.len(), 3);
        // The smallest nonzero one is the standard copy of ℤ.
        assert!(l[1].contains(&[0, 7]) && !l[1].contains(&[1, 0]));
    }

    #[test]
    fn prime_ideals_from_pairs() {
        let g = OrderedGroupModel::LexZ(2);
        let m = prime_ideal_from_pair(&ultra(0), &ConvexSubgroup { group: g, rank: 0 }).unwrap();
        assert_eq!(m, PrimeIdeal::maximal(p(2), 2));
        let inf = prime_ideal_from_pair(&ultra(0), &ConvexSubgroup { group: g, rank: 1 }).unwrap();
        assert_eq!(inf.to_string(), "m_2^inf");
        assert!(inf.contains_value(&Some(vec![1, 0])));
        assert!(!inf.contains_value(&Some(vec![0, 3])));
        assert!(m.contains_value(&Some(vec![0, 3])));
        assert!(inf.is_contained_in(&m) && !m.is_contained_in(&inf));
        assert_eq!(
            prime_ideal_from_pair(&ultra(0), &ConvexSubgroup { group: g, rank: 2 }),
            Err(Error::NotProperSubgroup)
        );
        assert_eq!(
            prime_ideal_from_pair(&IndexFilterSpec::Frechet, &ConvexSubgroup { group: g, rank: 0 }),
            Err(Error::NotUltra)
        );
        // 2^i lies in m_2^inf, 12 only in m_2.
        assert_eq!(inf.contains(&IndexedElement::power(rat(2, 1))), Decision::Decided(true));
        assert_eq!(inf.contains(&IndexedElement::constant(rat(12, 1))), Decision::Decided(false));
        assert_eq!(m.contains(&IndexedElement::constant(rat(12, 1))), Decision::Decided(true));
    }
}
