//! Exact certification of the structural statements about Q[H]: the maps f
//! and g, the ideal I-hat, the outer homotopy, and the truncated homology
//! checks built on them.

pub mod axioms;
pub mod extension;
pub mod gk;
pub mod h1;
pub mod homotopy;
pub mod ideal;
pub mod inner;
pub mod omega;
pub mod outer;
pub mod quotient;
pub mod rank;
pub mod relations;
pub mod report;
pub mod settings;
pub mod suites;
pub mod surface;
