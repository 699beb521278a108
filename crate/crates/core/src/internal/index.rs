//! Index sets of ultrapower families and filters on them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prime::Prime;

/// Largest finite index set accepted.
pub const MAX_FINITE_INDEX: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSpec {
    Finite(usize),
    SymbolicCountable,
}

/// Filter on an index set, given symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexFilterSpec {
    PrincipalUltra { index: usize },
    Principal { set: BTreeSet<usize> },
    /// Cofinite sets.
    Frechet,
    /// Generated by finitely many finite sets.
    Generated { basis: Vec<BTreeSet<usize>> },
}

/// Finite or cofinite subset of the index set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "indices", rename_all = "snake_case")]
pub enum IndexSet {
    Finite(BTreeSet<usize>),
    /// Everything except the listed indices.
    Cofinite(BTreeSet<usize>),
}

impl IndexSet {
    pub fn finite<I: IntoIterator<Item = usize>>(it: I) -> IndexSet {
        IndexSet::Finite(it.into_iter().collect())
    }

    pub fn cofinite<I: IntoIterator<Item = usize>>(it: I) -> IndexSet {
        IndexSet::Cofinite(it.into_iter().collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        match self {
            IndexSet::Finite(s) => s.contains(&i),
            IndexSet::Cofinite(s) => !s.contains(&i),
        }
    }

    pub fn is_superset_of(&self, t: &BTreeSet<usize>) -> bool {
        t.iter().all(|&i| self.contains(i))
    }
}

impl IndexFilterSpec {
    /// The principal ultrafilter at a prime, indexing all primes from 0.
    pub fn at_prime(p: &Prime) -> Result<IndexFilterSpec> {
        let index = p.index().ok_or_else(|| Error::Invalid(format!("prime {p} has no small index")))?;
        Ok(IndexFilterSpec::PrincipalUltra { index })
    }

    pub fn validate(&self, index: IndexSpec) -> Result<()> {
        let bound = match index {
            IndexSpec::Finite(n) if n > MAX_FINITE_INDEX => {
                return Err(Error::Invalid(format!("finite index sets are limited to {MAX_FINITE_INDEX}")))
            }
            IndexSpec::Finite(n) => Some(n),
            IndexSpec::SymbolicCountable => None,
        };
        let in_range = |i: &usize| bound.is_none_or(|n| *i < n);
        let ok = match self {
            IndexFilterSpec::PrincipalUltra { index } => in_range(index),
            IndexFilterSpec::Principal { set } => set.iter().all(in_range),
            IndexFilterSpec::Generated { basis } => !basis.is_empty() && basis.iter().flatten().all(in_range),
            IndexFilterSpec::Frechet => bound.is_none(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid("filter does not fit the index set".into()))
        }
    }

    /// Least member of a principal filter; `None` for the Fréchet filter.
    pub fn least_member(&self) -> Option<BTreeSet<usize>> {
        match self {
            IndexFilterSpec::PrincipalUltra { index } => Some([*index].into()),
            IndexFilterSpec::Principal { set } => Some(set.clone()),
            IndexFilterSpec::Frechet => None,
            IndexFilterSpec::Generated { basis } => {
                let mut it = basis.iter();
                let first = it.next()?.clone();
                Some(it.fold(first, |acc, s| &acc & s))
            }
        }
    }

    pub fn contains(&self, s: &IndexSet) -> bool {
        match self.least_member() {
            Some(t) => s.is_superset_of(&t),
            None => matches!(s, IndexSet::Cofinite(_)),
        }
    }

    pub fn is_proper(&self) -> bool {
        self.least_member().is_none_or(|t| !t.is_empty())
    }

    pub fn is_ultra(&self) -> bool {
        self.least_member().is_some_and(|t| t.len() == 1)
    }

    /// The index an ultrafilter is principal at.
    pub fn ultra_index(&self) -> Option<usize> {
        match self.least_member() {
            Some(t) if t.len() == 1 => t.into_iter().next(),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::p;

    #[test]
    fn membership() {
        let f = IndexFilterSpec::Generated { basis: vec![[1, 2, 3].into(), [2, 3, 4].into()] };
        assert_eq!(f.least_member(), Some([2, 3].into()));
        assert!(f.contains(&IndexSet::finite([2, 3, 9])));
        assert!(!f.contains(&IndexSet::finite([2])));
        assert!(f.contains(&IndexSet::cofinite([0])));
        assert!(IndexFilterSpec::Frechet.contains(&IndexSet::cofinite([0, 1])));
        assert!(!IndexFilterSpec::Frechet.contains(&IndexSet::finite([0, 1])));
        assert!(!IndexFilterSpec::Frechet.is_ultra());
        assert_eq!(IndexFilterSpec::at_prime(&p(7)).unwrap(), IndexFilterSpec::PrincipalUltra { index: 3 });
    }

    #[test]
    fn validation() {
        assert!(IndexFilterSpec::Frechet.validate(IndexSpec::Finite(5)).is_err());
        assert!(IndexFilterSpec::PrincipalUltra { index: 5 }.validate(IndexSpec::Finite(5)).is_err());
        assert!(IndexFilterSpec::PrincipalUltra { index: 4 }.validate(IndexSpec::Finite(5)).is_ok());
        assert!(IndexFilterSpec::Frechet.validate(IndexSpec::SymbolicCountable).is_ok());
        assert!(IndexFilterSpec::Frechet.validate(IndexSpec::Finite(65)).is_err());
        let json = serde_json::to_string(&IndexFilterSpec::PrincipalUltra { index: 2 }).unwrap();
        assert_eq!(json, r#"{"kind":"principal_ultra","index":2}"#);
    }
}
