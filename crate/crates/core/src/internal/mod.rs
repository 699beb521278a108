//! The internal ring `*ℤ` through finite index data: ideals from divisor
//! filters, residue fields, value groups and their convex subgroups.

pub mod element;
pub mod ideal;
pub mod index;
pub mod value_group;

pub use element::{ClosedForm, IndexedElement};
pub use ideal::{
    filter_from_ideal, ideal_from_filter, residue_at, residue_crt_witness, residue_field_map, v_of, vset_filter,
    IdealFlags, ResidueClass, RingIdeal,
};
pub use index::{IndexFilterSpec, IndexSet, IndexSpec};
pub use value_group::{
    convex_subgroups, element_value, embed_int, lex_cmp, prime_ideal_from_pair, value_group_compare,
    ConvexSubgroup, Family, LexValue, OrderedGroupModel, PrimeIdeal, ValueGroupElement,
};
