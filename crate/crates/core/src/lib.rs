//! Exact computations in the homological Goldman Lie algebra Q[H] of a
//! finitely generated abelian group H with an alternating form.

pub mod algebra;
pub mod complex;
pub mod group;
pub mod linalg;
pub mod sample;
pub mod snf;
pub mod verify;

pub use group::{AbelianGroup, GroupElement, GroupError, GroupSpec, SpecError};
pub use linalg::{Q, SparseRationalMatrix};
