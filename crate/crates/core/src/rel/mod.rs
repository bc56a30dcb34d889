//! Frobenius algebras in the category of sets and relations: groupoids,
//! relations respecting inverses, and exhaustive enumeration.

mod enumerate;
mod groupoid;
mod relation;

pub use enumerate::{
    canonical_form, enumerate_frobenius_rel, enumerate_groupoids, isomorphism_classes, EnumeratedStructure,
    MAX_CANONICAL, MAX_CARRIER,
};
pub use groupoid::{
    algebra_to_groupoid, canonical_form as groupoid_canonical_form, groupoid_to_algebra, verify_groupoid, Groupoid,
    MAX_VERTEX_GROUP,
};
pub use relation::{check_cpstar_rel, cpstar_rel_witness, respects_inverses, Relation};
