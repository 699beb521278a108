//! Distributive lattices of prime sets and divisors, with filters and ideals
//! given by finite bases.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::divisor::{ideal_intersect, ideal_sum, Divisor};
use crate::error::{Error, Result};
use crate::prime::Prime;
use crate::Decision;

pub type PrimeSet = BTreeSet<Prime>;

/// Ground set of prime labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ground {
    Finite(PrimeSet),
    Symbolic(SymbolicGround),
}

/// Countably infinite ground given by description only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolicGround {
    AllPrimes,
}

impl Ground {
    pub fn contains(&self, p: &Prime) -> bool {
        match self {
            Ground::Finite(s) => s.contains(p),
            Ground::Symbolic(SymbolicGround::AllPrimes) => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeKind {
    /// All subsets of a finite ground, ordered by inclusion.
    Powerset { ground: PrimeSet },
    /// Finite subsets of a ground, ordered by inclusion.
    FinSubsets { ground: Ground },
    /// Integral divisors supported on `support`, ordered exponentwise.
    DivisorMonoid { support: PrimeSet },
    /// Order-reversed copy of `inner`.
    Dual { inner: Box<LatticeKind> },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Set(PrimeSet),
    Divisor(Divisor),
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Set(s) => f.debug_set().entries(s).finish(),
            Element::Divisor(d) => write!(f, "{d}"),
        }
    }
}

impl Element {
    pub fn set<I: IntoIterator<Item = Prime>>(it: I) -> Element {
        Element::Set(it.into_iter().collect())
    }

    pub fn as_set(&self) -> Option<&PrimeSet> {
        match self {
            Element::Set(s) => Some(s),
            Element::Divisor(_) => None,
        }
    }

    pub fn as_divisor(&self) -> Option<&Divisor> {
        match self {
            Element::Divisor(d) => Some(d),
            Element::Set(_) => None,
        }
    }
}

fn mismatch() -> ! {
    panic!("lattice operation on elements of different kinds")
}

impl LatticeKind {
    pub fn powerset<I: IntoIterator<Item = Prime>>(ground: I) -> LatticeKind {
        LatticeKind::Powerset { ground: ground.into_iter().collect() }
    }

    pub fn fin_subsets<I: IntoIterator<Item = Prime>>(ground: I) -> LatticeKind {
        LatticeKind::FinSubsets { ground: Ground::Finite(ground.into_iter().collect()) }
    }

    pub fn divisor_monoid<I: IntoIterator<Item = Prime>>(support: I) -> LatticeKind {
        LatticeKind::DivisorMonoid { support: support.into_iter().collect() }
    }

    pub fn dual(self) -> LatticeKind {
        LatticeKind::Dual { inner: Box::new(self) }
    }

    /// Removes pairs of nested duals; the result has at most one.
    pub fn normalized(&self) -> LatticeKind {
        match self {
            LatticeKind::Dual { inner } => match inner.normalized() {
                LatticeKind::Dual { inner } => *inner,
                other => other.dual(),
            },
            other => other.clone(),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (LatticeKind::Powerset { ground }, Element::Set(s)) => s.is_subset(ground),
            (LatticeKind::FinSubsets { ground }, Element::Set(s)) => s.iter().all(|p| ground.contains(p)),
            (LatticeKind::DivisorMonoid { support }, Element::Divisor(d)) => {
                d.is_integral() && d.support().all(|p| support.contains(p))
            }
            (LatticeKind::Dual { inner }, x) => inner.contains(x),
            _ => false,
        }
    }

    fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ElementNotInLattice)
        }
    }

    pub fn meet(&self, a: &Element, b: &Element) -> Element {
        match self {
            LatticeKind::Dual { inner } => inner.join(a, b),
            _ => match (a, b) {
                (Element::Set(x), Element::Set(y)) => Element::Set(x & y),
                (Element::Divisor(x), Element::Divisor(y)) => Element::Divisor(ideal_sum(x, y)),
                _ => mismatch(),
            },
        }
    }

    pub fn join(&self, a: &Element, b: &Element) -> Element {
        match self {
            LatticeKind::Dual { inner } => inner.meet(a, b),
            _ => match (a, b) {
                (Element::Set(x), Element::Set(y)) => Element::Set(x | y),
                (Element::Divisor(x), Element::Divisor(y)) => Element::Divisor(ideal_intersect(x, y)),
                _ => mismatch(),
            },
        }
    }

    pub fn leq(&self, a: &Element, b: &Element) -> bool {
        match self {
            LatticeKind::Dual { inner } => inner.leq(b, a),
            _ => match (a, b) {
                (Element::Set(x), Element::Set(y)) => x.is_subset(y),
                (Element::Divisor(x), Element::Divisor(y)) => x.le(y),
                _ => mismatch(),
            },
        }
    }

    pub fn bottom(&self) -> Option<Element> {
        match self {
            LatticeKind::Powerset { .. } | LatticeKind::FinSubsets { .. } => Some(Element::Set(PrimeSet::new())),
            LatticeKind::DivisorMonoid { .. } => Some(Element::Divisor(Divisor::zero())),
            LatticeKind::Dual { inner } => inner.top(),
        }
    }

    pub fn top(&self) -> Option<Element> {
        match self {
            LatticeKind::Powerset { ground } => Some(Element::Set(ground.clone())),
            LatticeKind::FinSubsets { ground: Ground::Finite(g) } => Some(Element::Set(g.clone())),
            LatticeKind::FinSubsets { ground: Ground::Symbolic(_) } => None,
            LatticeKind::DivisorMonoid { support } => support.is_empty().then(|| Element::Divisor(Divisor::zero())),
            LatticeKind::Dual { inner } => inner.bottom(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            LatticeKind::Powerset { .. } => true,
            LatticeKind::FinSubsets { ground } => matches!(ground, Ground::Finite(_)),
            LatticeKind::DivisorMonoid { support } => support.is_empty(),
            LatticeKind::Dual { inner } => inner.is_finite(),
        }
    }

    /// Every lattice kind modeled here is distributive.
    pub fn is_distributive(&self) -> bool {
        true
    }

    pub fn is_relatively_complemented(&self) -> bool {
        match self {
            LatticeKind::Powerset { .. } | LatticeKind::FinSubsets { .. } => true,
            LatticeKind::DivisorMonoid { support } => support.is_empty(),
            LatticeKind::Dual { inner } => inner.is_relatively_complemented(),
        }
    }

    /// All elements for finite kinds. Divisor monoids are cut off at
    /// exponent `cap`; symbolic grounds give `None`.
    pub fn enumerate(&self, cap: u32) -> Option<Vec<Element>> {
        match self {
            LatticeKind::Powerset { ground } | LatticeKind::FinSubsets { ground: Ground::Finite(ground) } => {
                Some(subsets(ground).into_iter().map(Element::Set).collect())
            }
            LatticeKind::FinSubsets { .. } => None,
            LatticeKind::DivisorMonoid { support } => {
                Some(divisor_box(support, cap).into_iter().map(Element::Divisor).collect())
            }
            LatticeKind::Dual { inner } => inner.enumerate(cap),
        }
    }
}

/// All subsets of a finite set, in binary-counter order.
pub fn subsets(ground: &PrimeSet) -> Vec<PrimeSet> {
    let g: Vec<&Prime> = ground.iter().collect();
    assert!(g.len() < 24, "ground too large to enumerate");
    (0u32..1 << g.len())
        .map(|mask| g.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| (*p).clone()).collect())
        .collect()
}

/// All integral divisors on `support` with exponents in `0..=cap`.
pub fn divisor_box(support: &PrimeSet, cap: u32) -> Vec<Divisor> {
    let mut out = vec![Vec::new()];
    for p in support {
        let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
        for prefix in &out {
            for e in 0..=cap as i64 {
                let mut v: Vec<(Prime, i64)> = prefix.clone();
                if e > 0 {
                    v.push((p.clone(), e));
                }
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(Divisor::from_sorted).collect()
}

/// Upward-closed, meet-closed subset given by an antichain of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FilterBasis {
    lattice: LatticeKind,
    generators: Vec<Element>,
}

/// Downward-closed, join-closed subset given by an antichain of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IdealBasis {
    lattice: LatticeKind,
    generators: Vec<Element>,
}

/// Minimal elements of a finite set, sorted.
fn antichain(lattice: &LatticeKind, xs: Vec<Element>, up: bool) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    for x in xs {
        let dominated = out.iter().any(|y| if up { lattice.leq(y, &x) } else { lattice.leq(&x, y) });
        if dominated {
            continue;
        }
        out.retain(|y| if up { !lattice.leq(&x, y) } else { !lattice.leq(y, &x) });
        out.push(x);
    }
    out.sort();
    out
}

/// Closure of `gens` under a binary operation.
fn close(gens: &[Element], op: impl Fn(&Element, &Element) -> Element) -> Vec<Element> {
    let mut set: BTreeSet<Element> = gens.iter().cloned().collect();
    loop {
        let items: Vec<Element> = set.iter().cloned().collect();
        let before = set.len();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                set.insert(op(a, b));
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// The filter generated by `gens`: meet-closure reduced to its minimal
/// elements. For finitely many generators this is the principal filter at
/// their meet.
pub fn filter_from_generators(lattice: &LatticeKind, gens: &[Element]) -> Result<FilterBasis> {
    if gens.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    for g in gens {
        lattice.check(g)?;
    }
    let closed = close(gens, |a, b| lattice.meet(a, b));
    Ok(FilterBasis { lattice: lattice.clone(), generators: antichain(lattice, closed, true) })
}

impl FilterBasis {
    pub fn lattice(&self) -> &LatticeKind {
        &self.lattice
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// The single generator of a finitely generated filter.
    pub fn principal(&self) -> &Element {
        debug_assert_eq!(self.generators.len(), 1);
        &self.generators[0]
    }

    pub fn member(&self, x: &Element) -> bool {
        self.generators.iter().any(|g| self.lattice.leq(g, x))
    }

    /// `self ⊆ other` as subsets of the lattice.
    pub fn is_subfilter_of(&self, other: &FilterBasis) -> bool {
        self.generators.iter().all(|g| other.member(g))
    }
}

pub fn filter_member(f: &FilterBasis, x: &Element) -> Result<bool> {
    f.lattice.check(x)?;
    Ok(f.member(x))
}

/// False exactly when the filter is the whole lattice.
pub fn filter_is_proper(f: &FilterBasis) -> bool {
    match f.lattice.bottom() {
        Some(b) => !f.member(&b),
        None => true,
    }
}

/// Filter description accepted by the decision procedures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterSpec {
    Basis(FilterBasis),
    /// Cofinite subsets of an infinite ground.
    Frechet(SymbolicGround),
}

impl From<FilterBasis> for FilterSpec {
    fn from(f: FilterBasis) -> FilterSpec {
        FilterSpec::Basis(f)
    }
}

/// Exhaustive check over a finite lattice: `a ∨ b ∈ F ⇒ a ∈ F or b ∈ F`.
fn prime_by_pairs(f: &FilterBasis, elements: &[Element]) -> bool {
    let outside: Vec<&Element> = elements.iter().filter(|x| !f.member(x)).collect();
    outside.iter().enumerate().all(|(i, a)| outside[i..].iter().all(|b| !f.member(&f.lattice.join(a, b))))
}

fn prime_principal(lattice: &LatticeKind, g: &Element) -> bool {
    match lattice {
        LatticeKind::DivisorMonoid { .. } => g.as_divisor().is_some_and(|d| d.len() == 1),
        LatticeKind::FinSubsets { .. } | LatticeKind::Powerset { .. } => g.as_set().is_some_and(|s| s.len() == 1),
        LatticeKind::Dual { inner } => match inner.as_ref() {
            // Principal ideals of a chain are prime; `ℕ^k` with `k ≥ 2` and
            // infinite power sets admit two incomparable elements above `g`.
            LatticeKind::DivisorMonoid { support } => support.len() <= 1,
            _ => false,
        },
    }
}

fn maximal_principal(lattice: &LatticeKind, g: &Element) -> bool {
    match lattice {
        LatticeKind::DivisorMonoid { .. } => {
            g.as_divisor().is_some_and(|d| d.len() == 1 && d.iter().all(|(_, e)| e == 1))
        }
        LatticeKind::FinSubsets { .. } | LatticeKind::Powerset { .. } => g.as_set().is_some_and(|s| s.len() == 1),
        // Principal ideals of an unbounded lattice can always be enlarged.
        LatticeKind::Dual { .. } => false,
    }
}

fn proper_basis(f: &FilterSpec) -> Result<Option<&FilterBasis>> {
    match f {
        FilterSpec::Basis(b) if !filter_is_proper(b) => Err(Error::ImproperFilter),
        FilterSpec::Basis(b) => Ok(Some(b)),
        FilterSpec::Frechet(_) => Ok(None),
    }
}

/// Primality. Finite lattices are decided by exhaustion, the infinite
/// kinds through their principal generator.
pub fn filter_is_prime(f: &FilterSpec) -> Result<Decision<bool>> {
    let Some(b) = proper_basis(f)? else {
        // Splitting an infinite ground into two infinite halves: neither
        // half is cofinite, their union is.
        return Ok(Decision::Decided(false));
    };
    let lattice = b.lattice.normalized();
    if lattice.is_finite() {
        let els = lattice.enumerate(0).expect("finite lattice");
        return Ok(Decision::Decided(prime_by_pairs(b, &els)));
    }
    Ok(Decision::Decided(prime_principal(&lattice, b.principal())))
}

/// Maximality among proper filters.
pub fn filter_is_maximal(f: &FilterSpec) -> Result<Decision<bool>> {
    let Some(b) = proper_basis(f)? else {
        return Ok(Decision::Decided(false));
    };
    let lattice = b.lattice.normalized();
    if lattice.is_finite() {
        // Filters of a finite lattice are principal: ↑h ⊋ ↑g iff h < g.
        let els = lattice.enumerate(0).expect("finite lattice");
        let bottom = lattice.bottom().expect("finite lattice has a bottom");
        let g = b.principal();
        let larger = els.iter().any(|h| h != g && h != &bottom && lattice.leq(h, g));
        return Ok(Decision::Decided(!larger));
    }
    Ok(Decision::Decided(maximal_principal(&lattice, b.principal())))
}

/// The `d` with `a ∧ d = lo` and `a ∨ d = hi`.
pub fn relative_complement(lattice: &LatticeKind, a: &Element, lo: &Element, hi: &Element) -> Result<Element> {
    for x in [a, lo, hi] {
        lattice.check(x)?;
    }
    if !lattice.leq(lo, a) || !lattice.leq(a, hi) {
        return Err(Error::NotInInterval);
    }
    if !lattice.is_relatively_complemented() {
        return Err(Error::NotComplemented);
    }
    match lattice {
        LatticeKind::Dual { inner } => relative_complement(inner, a, hi, lo),
        LatticeKind::DivisorMonoid { .. } => Ok(Element::Divisor(Divisor::zero())),
        _ => {
            let (a, lo, hi) = (a.as_set().unwrap(), lo.as_set().unwrap(), hi.as_set().unwrap());
            Ok(Element::Set(lo | &(hi - a)))
        }
    }
}

/// Moves a filter of `P(ground)` to the lattice of finite subsets of the
/// same ground.
pub fn bounded_filter_transfer(f: &FilterSpec) -> Result<FilterBasis> {
    let b = match f {
        FilterSpec::Frechet(_) => return Err(Error::UnboundedFilter),
        FilterSpec::Basis(b) => b,
    };
    let LatticeKind::Powerset { ground } = &b.lattice else {
        return Err(Error::Invalid("expected a filter on a power set".into()));
    };
    if !filter_is_proper(b) {
        return Err(Error::ImproperFilter);
    }
    Ok(FilterBasis {
        lattice: LatticeKind::fin_subsets(ground.iter().cloned()),
        generators: b.generators.clone(),
    })
}

/// Inverse of [`bounded_filter_transfer`].
pub fn bounded_filter_transfer_back(f: &FilterBasis) -> Result<FilterSpec> {
    let LatticeKind::FinSubsets { ground: Ground::Finite(ground) } = &f.lattice else {
        return Err(Error::UnboundedFilter);
    };
    Ok(FilterSpec::Basis(FilterBasis {
        lattice: LatticeKind::powerset(ground.iter().cloned()),
        generators: f.generators.clone(),
    }))
}

pub fn ideal_from_generators(lattice: &LatticeKind, gens: &[Element]) -> Result<IdealBasis> {
    if gens.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    for g in gens {
        lattice.check(g)?;
    }
    let closed = close(gens, |a, b| lattice.join(a, b));
    Ok(IdealBasis { lattice: lattice.clone(), generators: antichain(lattice, closed, false) })
}

impl IdealBasis {
    pub fn lattice(&self) -> &LatticeKind {
        &self.lattice
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn member(&self, x: &Element) -> bool {
        self.generators.iter().any(|g| self.lattice.leq(x, g))
    }

    pub fn is_proper(&self) -> bool {
        match self.lattice.top() {
            Some(t) => !self.member(&t),
            None => true,
        }
    }
}

pub fn ideal_member(i: &IdealBasis, x: &Element) -> Result<bool> {
    i.lattice.check(x)?;
    Ok(i.member(x))
}
