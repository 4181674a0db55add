//! klab-core: an exact computational toolkit for finite-dimensional DG
//! algebras over prime fields.
//!
//! The crate builds Koszul complexes of artinian monomial rings and the small
//! zero-differential algebra classes that occur in embedding codepth <= 3,
//! computes Tor / RHom data through truncated minimal semi-free resolutions,
//! runs semidualizing-module verdicts, and classifies Koszul homology
//! algebras by their multiplication invariants. All arithmetic is exact
//! (prime fields, deterministic eliminations); every truncated computation
//! carries an explicit correctness window.

pub mod build;
pub mod dgcore;
pub mod exactla;

pub use exactla::{FieldMatrix, GradedMap, GradedSpace, PrimeField};
