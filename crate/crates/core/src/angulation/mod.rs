//! Additive categories with an automorphism, sequences of morphisms and the
//! obstruction to an exact sequence being an angle.

pub mod category;
pub mod delta;
pub mod heller;
pub mod modf;
pub mod oracle;
pub mod sequence;
pub mod theta;
pub mod verify;
pub mod weak;

pub use category::{BasedCategory, Mor, Obj};
pub use modf::FunctorCategory;
pub use oracle::{AngleClassOracle, OracleKind};
pub use sequence::{NSigmaSequence, SequenceMorphism};
pub use theta::{theta_membership, ThetaExtension, ThetaIso, UnitFamily};
pub use verify::{verify_axioms, AxiomReport, Faults, Status, VerifyBudget};
