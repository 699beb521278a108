//! Ideals, filters, valuations and adeles of the internal Dedekind ring
//! `*ℤ`, modeled through finite and symbolic data.

pub mod completions;
pub mod config;
pub mod divisor;
pub mod error;
pub mod lattice;
pub mod prime;
pub mod growth;
pub mod internal;
pub mod rational;
pub mod spectra;
pub mod suite;
pub mod supp_ch;

pub use error::{Error, Result};
pub use prime::Prime;

use serde::{Serialize, Serializer};

/// Outcome of a partial decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision<T> {
    Decided(T),
    Undecidable,
}

impl<T> Decision<T> {
    pub fn decided(self) -> Option<T> {
        match self {
            Decision::Decided(t) => Some(t),
            Decision::Undecidable => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Decision<U> {
        match self {
            Decision::Decided(t) => Decision::Decided(f(t)),
            Decision::Undecidable => Decision::Undecidable,
        }
    }
}

impl<T: Serialize> Serialize for Decision<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Decision::Decided(t) => t.serialize(s),
            Decision::Undecidable => s.serialize_str("undecidable"),
        }
    }
}
