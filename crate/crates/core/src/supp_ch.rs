//! Support and characteristic maps between divisor filters and filters of
//! prime sets, and the `*`-radical they induce.

use std::collections::BTreeSet;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::lattice::{
    filter_from_generators, filter_is_proper, Element, FilterBasis, LatticeKind, PrimeSet,
};

/// Filter of integral divisors supported on a finite ground.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorFilter {
    ground: PrimeSet,
    basis: FilterBasis,
}

/// Filter of subsets of a finite ground.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportFilter {
    ground: PrimeSet,
    basis: FilterBasis,
}

pub fn supp(d: &Divisor) -> PrimeSet {
    d.support().cloned().collect()
}

/// Characteristic divisor: exponent 1 on every prime of `s`.
pub fn ch(s: &PrimeSet) -> Divisor {
    Divisor::new(s.iter().map(|p| (p.clone(), 1)))
}

impl DivisorFilter {
    pub fn new(ground: &PrimeSet, gens: &[Divisor]) -> Result<DivisorFilter> {
        let lattice = LatticeKind::DivisorMonoid { support: ground.clone() };
        let gens: Vec<Element> = gens.iter().cloned().map(Element::Divisor).collect();
        Ok(DivisorFilter { ground: ground.clone(), basis: filter_from_generators(&lattice, &gens)? })
    }

    pub fn ground(&self) -> &PrimeSet {
        &self.ground
    }

    pub fn basis(&self) -> &FilterBasis {
        &self.basis
    }

    /// The divisor generating this (principal) filter.
    pub fn generator(&self) -> &Divisor {
        self.basis.principal().as_divisor().expect("divisor filter")
    }

    pub fn generators(&self) -> Vec<Divisor> {
        self.basis.generators().iter().map(|g| g.as_divisor().unwrap().clone()).collect()
    }

    /// Membership; divisors outside the ground or with negative exponents
    /// are not elements of the lattice and are rejected.
    pub fn contains(&self, d: &Divisor) -> Result<bool> {
        crate::lattice::filter_member(&self.basis, &Element::Divisor(d.clone()))
    }

    pub fn is_proper(&self) -> bool {
        filter_is_proper(&self.basis)
    }

    pub fn is_subfilter_of(&self, other: &DivisorFilter) -> bool {
        self.basis.is_subfilter_of(&other.basis)
    }
}

impl SupportFilter {
    pub fn new(ground: &PrimeSet, gens: &[PrimeSet]) -> Result<SupportFilter> {
        let lattice = LatticeKind::fin_subsets(ground.iter().cloned());
        let gens: Vec<Element> = gens.iter().cloned().map(Element::Set).collect();
        Ok(SupportFilter { ground: ground.clone(), basis: filter_from_generators(&lattice, &gens)? })
    }

    pub fn ground(&self) -> &PrimeSet {
        &self.ground
    }

    pub fn basis(&self) -> &FilterBasis {
        &self.basis
    }

    pub fn generator(&self) -> &PrimeSet {
        self.basis.principal().as_set().expect("support filter")
    }

    pub fn contains(&self, s: &PrimeSet) -> Result<bool> {
        crate::lattice::filter_member(&self.basis, &Element::Set(s.clone()))
    }

    pub fn is_proper(&self) -> bool {
        filter_is_proper(&self.basis)
    }

    /// A filter of subsets of a finite set is maximal iff it is principal
    /// at a singleton.
    pub fn is_maximal(&self) -> bool {
        self.generator().len() == 1
    }
}

/// Image filter `{supp(f) : f ∈ F}` (upward closed).
pub fn supp_filter(f: &DivisorFilter) -> SupportFilter {
    let gens: Vec<PrimeSet> = f.generators().iter().map(supp).collect();
    SupportFilter::new(&f.ground, &gens).expect("supports lie in the ground")
}

/// Filter generated by `{ch(S) : S ∈ U}`.
pub fn ch_filter(u: &SupportFilter) -> DivisorFilter {
    let gens: Vec<Divisor> = u.basis.generators().iter().map(|g| ch(g.as_set().unwrap())).collect();
    DivisorFilter::new(&u.ground, &gens).expect("characteristic divisors lie in the monoid")
}

/// `*Rad(F) = Ch(Supp(F))`.
pub fn star_radical_filter(f: &DivisorFilter) -> DivisorFilter {
    ch_filter(&supp_filter(f))
}

pub fn is_star_radical(f: &DivisorFilter) -> bool {
    star_radical_filter(f) == *f
}

/// Primality via the support filter: a proper divisor filter is prime iff
/// its support filter is principal at a single prime.
pub fn is_prime_divisor_filter(f: &DivisorFilter) -> Result<bool> {
    if !f.is_proper() {
        return Err(Error::ImproperFilter);
    }
    Ok(supp_filter(f).is_maximal())
}

/// Maximal divisor filters are exactly `Ch` of maximal support filters.
pub fn is_maximal_divisor_filter(f: &DivisorFilter) -> Result<bool> {
    if !f.is_proper() {
        return Err(Error::ImproperFilter);
    }
    let u = supp_filter(f);
    Ok(u.is_maximal() && ch_filter(&u) == *f)
}

/// For a maximal support filter `U`, returns `Ch(U)` after checking
/// `Supp(Ch(U)) = U`.
pub fn maximal_filter_roundtrip(u: &SupportFilter) -> Result<DivisorFilter> {
    if !u.is_proper() || !u.is_maximal() {
        return Err(Error::NotMaximal);
    }
    let m = ch_filter(u);
    debug_assert_eq!(supp_filter(&m), *u);
    Ok(m)
}

/// Slow checks written directly from the definitions, over the box of
/// divisors with exponents at most `cap`. Used to cross-examine the fast
/// path above.
pub mod exhaustive {
    use super::*;
    use crate::lattice::{divisor_box, subsets};

    pub fn member(f: &DivisorFilter, d: &Divisor) -> bool {
        f.generators().iter().any(|g| g.le(d))
    }

    /// `g ∈ *Rad(F)` iff `n·g ∈ F` for some `n ≥ 1`. For a filter generated
    /// inside the box `n` never needs to exceed the largest generator exponent.
    pub fn star_radical_member(f: &DivisorFilter, g: &Divisor) -> bool {
        let bound = f.generators().iter().flat_map(|d| d.iter().map(|(_, e)| e).collect::<Vec<_>>()).max().unwrap_or(1).max(1);
        (1..=bound).any(|n| member(f, &g.scale(n)))
    }

    pub fn is_proper(f: &DivisorFilter) -> bool {
        !member(f, &Divisor::zero())
    }

    /// Proper, and `max(a, b) ∈ F ⇒ a ∈ F or b ∈ F` over the box.
    pub fn is_prime(f: &DivisorFilter, cap: u32) -> bool {
        if !is_proper(f) {
            return false;
        }
        let els = divisor_box(&f.ground, cap);
        let outside: Vec<&Divisor> = els.iter().filter(|d| !member(f, d)).collect();
        outside.iter().enumerate().all(|(i, a)| {
            outside[i..].iter().all(|b| !member(f, &crate::divisor::ideal_intersect(a, b)))
        })
    }

    pub fn support_member(u: &SupportFilter, s: &PrimeSet) -> bool {
        u.basis.generators().iter().any(|g| g.as_set().unwrap().is_subset(s))
    }

    pub fn support_is_prime(u: &SupportFilter) -> bool {
        let els = subsets(&u.ground);
        if support_member(u, &PrimeSet::new()) {
            return false;
        }
        els.iter().all(|a| els.iter().all(|b| !support_member(u, &(a | b)) || support_member(u, a) || support_member(u, b)))
    }

    /// `F ⊆ G`, compared on the box.
    pub fn contained_in(f: &DivisorFilter, g: &DivisorFilter, cap: u32) -> bool {
        divisor_box(&f.ground, cap).iter().all(|d| !member(f, d) || member(g, d))
    }

    /// Principal proper filters of the box that no other proper principal
    /// filter strictly contains.
    pub fn maximal_filters(ground: &PrimeSet, cap: u32) -> Vec<DivisorFilter> {
        let all: Vec<DivisorFilter> = divisor_box(ground, cap)
            .into_iter()
            .map(|d| DivisorFilter::new(ground, &[d]).unwrap())
            .filter(is_proper)
            .collect();
        all.iter()
            .filter(|f| !all.iter().any(|g| g != *f && contained_in(f, g, cap)))
            .cloned()
            .collect()
    }

    pub fn maximal_support_filters(ground: &PrimeSet) -> Vec<SupportFilter> {
        let all: Vec<SupportFilter> = subsets(ground)
            .into_iter()
            .map(|s| SupportFilter::new(ground, &[s]).unwrap())
            .filter(|u| !support_member(u, &PrimeSet::new()))
            .collect();
        let sub = |a: &SupportFilter, b: &SupportFilter| subsets(ground).iter().all(|s| !support_member(a, s) || support_member(b, s));
        all.iter().filter(|u| !all.iter().any(|v| v != *u && sub(u, v))).cloned().collect()
    }

    /// Supports of the filter's members inside the box, as a set.
    pub fn support_image(f: &DivisorFilter, cap: u32) -> BTreeSet<PrimeSet> {
        divisor_box(&f.ground, cap).iter().filter(|d| member(f, d)).map(supp).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{divisor_box, subsets};
    use crate::prime::p;
    use proptest::prelude::*;

    fn ground() -> PrimeSet {
        [p(2), p(3), p(5)].into_iter().collect()
    }

    fn d(xs: &[(u64, i64)]) -> Divisor {
        Divisor::new(xs.iter().map(|&(q, e)| (p(q), e)))
    }

    fn s(xs: &[u64]) -> PrimeSet {
        xs.iter().map(|&x| p(x)).collect()
    }

    #[test]
    fn supp_and_ch_examples() {
        assert_eq!(supp(&d(&[(2, 3), (5, 1)])), s(&[2, 5]));
        assert_eq!(ch(&s(&[2, 5])), d(&[(2, 1), (5, 1)]));
        let f = DivisorFilter::new(&ground(), &[d(&[(2, 2), (3, 1)])]).unwrap();
        assert_eq!(supp_filter(&f).generator(), &s(&[2, 3]));
        let r = star_radical_filter(&f);
        assert_eq!(r.generator(), &d(&[(2, 1), (3, 1)]));
        assert!(!is_star_radical(&f));
        assert!(is_star_radical(&r));
    }

    #[test]
    fn primality_examples() {
        let g = ground();
        let f = DivisorFilter::new(&g, &[d(&[(2, 3)])]).unwrap();
        assert!(is_prime_divisor_filter(&f).unwrap());
        assert!(!is_maximal_divisor_filter(&f).unwrap());
        assert!(exhaustive::is_prime(&f, 3));
        let f = DivisorFilter::new(&g, &[d(&[(2, 1), (3, 1)])]).unwrap();
        assert!(!is_prime_divisor_filter(&f).unwrap());
        assert!(!exhaustive::is_prime(&f, 3));
        // The meet of {2:1} and {3:1} is the zero divisor.
        let f = DivisorFilter::new(&g, &[d(&[(2, 1)]), d(&[(3, 1)])]).unwrap();
        assert!(!exhaustive::is_prime(&f, 3));
        assert_eq!(is_prime_divisor_filter(&f), Err(Error::ImproperFilter));
    }

    #[test]
    fn maximal_roundtrip() {
        let g = ground();
        let u = SupportFilter::new(&g, &[s(&[3])]).unwrap();
        let m = maximal_filter_roundtrip(&u).unwrap();
        assert_eq!(m.generator(), &d(&[(3, 1)]));
        assert_eq!(supp_filter(&m), u);
        let not_max = SupportFilter::new(&g, &[s(&[2, 3])]).unwrap();
        assert_eq!(maximal_filter_roundtrip(&not_max), Err(Error::NotMaximal));
        let maxs = exhaustive::maximal_filters(&g, 3);
        assert_eq!(maxs.len(), 3);
        assert!(maxs.contains(&m));
    }

    fn gens() -> impl Strategy<Value = Vec<Divisor>> {
        let boxed = divisor_box(&ground(), 3);
        prop::collection::vec(prop::sample::select(boxed), 1..3)
    }

    proptest! {
        #[test]
        fn supp_ch_identity(i in 0usize..8, j in 0usize..8) {
            let subs = subsets(&ground());
            let u = SupportFilter::new(&ground(), &[subs[i].clone(), subs[j].clone()]).unwrap();
            prop_assert_eq!(supp_filter(&ch_filter(&u)), u);
        }

        #[test]
        fn star_radical_matches_definition(gs in gens()) {
            let f = DivisorFilter::new(&ground(), &gs).unwrap();
            let r = star_radical_filter(&f);
            for g in divisor_box(&ground(), 3) {
                prop_assert_eq!(r.contains(&g).unwrap(), exhaustive::star_radical_member(&f, &g));
            }
            prop_assert!(f.is_subfilter_of(&r));
            prop_assert_eq!(star_radical_filter(&r), r);
        }

        #[test]
        fn supp_is_the_image(gs in gens()) {
            let f = DivisorFilter::new(&ground(), &gs).unwrap();
            let u = supp_filter(&f);
            let image = exhaustive::support_image(&f, 3);
            for t in subsets(&ground()) {
                prop_assert_eq!(u.contains(&t).unwrap(), image.contains(&t));
            }
        }

        #[test]
        fn prime_fast_path_agrees(gs in gens()) {
            let f = DivisorFilter::new(&ground(), &gs).unwrap();
            match is_prime_divisor_filter(&f) {
                Ok(b) => {
                    prop_assert_eq!(b, exhaustive::is_prime(&f, 3));
                    prop_assert_eq!(b, exhaustive::support_is_prime(&supp_filter(&f)));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::ImproperFilter);
                    prop_assert!(!exhaustive::is_proper(&f));
                }
            }
        }
    }
}
