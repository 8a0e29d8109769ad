//! Quiver presentations, based algebras and their modules.

pub mod algebra;
pub mod decompose;
pub mod module;
pub mod quiver;

pub use algebra::{build_algebra, BasedAlgebra, BasisElem, Generator};
pub use quiver::{jacobi_relations, parse_presentation, quiver_isomorphism, AlgebraPresentation, Path, PathExpr, Quiver};
pub use module::{extend_along, factor_through, Automorphism, DirectSum, HomSpace, Module, ModuleMap, ModuleSpec};
pub use decompose::{decompose, find_iso, is_selfinjective, nakayama_permutation, strip_projectives, Summand};
