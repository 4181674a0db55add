//! Validated DG algebras and DG modules: every axiom (differential squared,
//! unit, associativity, graded commutativity with vanishing odd squares,
//! Leibniz, locality of degree 0) is machine-checked at construction.

pub mod algebra;
pub mod json;
pub mod module;
pub mod morphism;
pub mod ops;

pub use algebra::{
    augmentation_map, make_algebra, AlgebraDescription, DGAlgebra, DgError, PairTable, SparseVec,
};
pub use json::{algebra_from_json, algebra_from_json_str, algebra_to_json, algebra_to_json_string, AlgebraJson};
pub use module::DGModule;
pub use morphism::{
    biduality_map, find_module_isomorphism, hom_module_basis, ideal_times_module,
    projection_morphism, DGAlgebraMorphism, DGMorphism,
};
pub use ops::{annihilator_check, annihilator_of_positive_part, tensor_algebras};
