//! Exact linear algebra over prime fields: the substrate every homology
//! computation in this crate reduces to.

pub mod field;
pub mod graded;
pub mod matrix;

pub use field::{FieldError, PrimeField};
pub use graded::{
    euler_characteristic, extend_basis, homology_at, homology_from_blocks, DegreeDims, GradedError,
    GradedMap, GradedSpace, HomologyAt, Span,
};
pub use matrix::{FieldMatrix, RankKernelImage, SolveError};
