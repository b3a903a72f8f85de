//! Linear relations between finite-dimensional hermitian spaces over the
//! Gaussian rationals: composition, reverse, graphs, diagonals, adjoints and
//! inclusion, all exact and in canonical row-echelon form.

pub mod lemmas;
pub mod relation;
pub mod scalar;

pub use relation::{compose, LinearRelation, RelError, RelationJson};
