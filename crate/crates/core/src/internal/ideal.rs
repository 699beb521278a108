//! Ideals of the internal ring attached to divisor filters, the `V(a)`
//! map, and residue fields at maximal ideals.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::divisor::{crt_solve, factor_int, Divisor, IntegralDivisor};
use crate::error::{Error, Result};
use crate::internal::index::IndexFilterSpec;
use crate::lattice::PrimeSet;
use crate::prime::Prime;
use crate::supp_ch::{
    is_maximal_divisor_filter, is_prime_divisor_filter, is_star_radical, DivisorFilter, SupportFilter,
};

/// Cached structural flags of an ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdealFlags {
    pub proper: bool,
    /// Finitely generated filters give internal (principal) ideals.
    pub internal: bool,
    pub star_radical: bool,
    pub prime: bool,
    pub maximal: bool,
}

/// Ideal `{a : div(a) ∈ F}` of the semilocal model over the filter's ground.
#[derive(Debug)]
pub struct RingIdeal {
    filter: DivisorFilter,
    flags: OnceLock<IdealFlags>,
}

impl Clone for RingIdeal {
    fn clone(&self) -> RingIdeal {
        RingIdeal { filter: self.filter.clone(), flags: self.flags.clone() }
    }
}

impl PartialEq for RingIdeal {
    fn eq(&self, other: &RingIdeal) -> bool {
        self.filter == other.filter
    }
}

impl Eq for RingIdeal {}

/// Residue class of an integer in `ℤ/p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueClass {
    pub prime: Prime,
    #[serde(serialize_with = "crate::rational::int_as_string")]
    pub value: BigInt,
}

pub fn ideal_from_filter(f: &DivisorFilter, allow_unit: bool) -> Result<RingIdeal> {
    if !f.is_proper() && !allow_unit {
        return Err(Error::ImproperFilter);
    }
    Ok(RingIdeal { filter: f.clone(), flags: OnceLock::new() })
}

/// Filter of divisors of the generators' ideal: principal at their minimum.
pub fn filter_from_ideal(ground: &PrimeSet, gens: &[Divisor]) -> Result<DivisorFilter> {
    DivisorFilter::new(ground, gens)
}

impl RingIdeal {
    pub fn filter(&self) -> &DivisorFilter {
        &self.filter
    }

    pub fn ground(&self) -> &PrimeSet {
        self.filter.ground()
    }

    pub fn generators(&self) -> Vec<Divisor> {
        self.filter.generators()
    }

    pub fn flags(&self) -> IdealFlags {
        *self.flags.get_or_init(|| {
            let proper = self.filter.is_proper();
            IdealFlags {
                proper,
                internal: true,
                star_radical: is_star_radical(&self.filter),
                prime: proper && is_prime_divisor_filter(&self.filter).unwrap_or(false),
                maximal: proper && is_maximal_divisor_filter(&self.filter).unwrap_or(false),
            }
        })
    }

    pub fn contains_divisor(&self, d: &Divisor) -> Result<bool> {
        self.filter.contains(d)
    }

    /// Membership of an integer; primes outside the ground are units.
    pub fn contains_integer(&self, n: &BigInt) -> bool {
        if n.is_zero() {
            return true;
        }
        let d = restrict(&factor_int(n).expect("nonzero"), self.ground());
        self.filter.contains(&d).expect("restricted divisor lies in the monoid")
    }

    /// The prime of a maximal ideal.
    pub fn maximal_prime(&self) -> Result<Prime> {
        if !self.flags().maximal {
            return Err(Error::NotMaximal);
        }
        Ok(self.filter.generator().support().next().expect("maximal filter has one prime").clone())
    }
}

/// Keeps only the exponents at primes of `ground`.
pub fn restrict(d: &Divisor, ground: &PrimeSet) -> Divisor {
    Divisor::new(d.iter().filter(|(p, _)| ground.contains(*p)).map(|(p, e)| (p.clone(), e)))
}

/// `V(a)`: the primes dividing `a`.
pub fn v_of(a: &BigInt) -> Result<PrimeSet> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(factor_int(a)?.support().cloned().collect())
}

/// The filter of ground subsets generated by `V(a) ∩ ground` for `a` in
/// the list.
pub fn vset_filter(ground: &PrimeSet, elements: &[BigInt]) -> Result<SupportFilter> {
    let sets = elements
        .iter()
        .map(|a| Ok(&v_of(a)? & ground))
        .collect::<Result<Vec<PrimeSet>>>()?;
    SupportFilter::new(ground, &sets)
}

/// `x mod p` at a maximal ideal.
pub fn residue_field_map(m: &RingIdeal, x: &BigInt) -> Result<ResidueClass> {
    let prime = m.maximal_prime()?;
    let value = x.mod_floor(&prime.to_bigint());
    Ok(ResidueClass { prime, value })
}

/// An integer `x` with `x ≡ t_i mod p_i` for each listed prime of the
/// support.
pub fn residue_crt_witness(support: &[Prime], targets: &[BigInt]) -> Result<BigInt> {
    if support.len() != targets.len() {
        return Err(Error::Invalid("support and targets differ in length".into()));
    }
    let cs: Vec<(BigInt, IntegralDivisor)> = support
        .iter()
        .zip(targets)
        .map(|(p, t)| (t.clone(), Divisor::prime_power(p.clone(), 1).try_into().unwrap()))
        .collect();
    crt_solve(&cs)
}

/// Residue of `x` at the maximal ideal picked out by an ultrafilter on the
/// positions of `support`.
pub fn residue_at(spec: &IndexFilterSpec, support: &[Prime], x: &BigInt) -> Result<ResidueClass> {
    if matches!(spec, IndexFilterSpec::Frechet) {
        return Err(Error::UndecidableUltrafilter);
    }
    let i = spec.ultra_index().ok_or(Error::NotMaximal)?;
    let prime = support.get(i).ok_or_else(|| Error::Invalid("index outside the support".into()))?.clone();
    let value = x.mod_floor(&prime.to_bigint());
    Ok(ResidueClass { prime, value })
}
