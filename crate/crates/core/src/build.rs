//! Constructors for the algebras the toolkit studies: artinian monomial
//! rings, Koszul complexes, exterior algebras, trivial extensions, the
//! codepth <= 3 class table, and homology algebras.

pub mod homology;
pub mod koszul;
pub mod ring;
pub mod table;

pub use homology::{homology_algebra, HomologyAlgebra};
pub use koszul::{exterior_algebra, koszul_complex, koszul_over, BasedAlgebra};
pub use ring::{format_monomial, parse_monomial, RingError, RingJson, RingPresentation};
pub use table::{
    field_algebra, graded_module, table_algebra, table_body, trivial_extension, BuildError,
    TableClass, TrivialExtension,
};
