//! Problem description: diffusion laws, reactions, boundary assignments,
//! scenarios and structural-assumption checks.

pub mod boundary;
pub mod diffusion;
pub mod expr;
pub mod reaction;
pub mod scenario;
pub mod validate;

pub use boundary::{BoundaryAssignment, BoundaryKind, Coupling, DynamicWeight};
pub use diffusion::{
    darcy_diffusivity, regularize_diffusion, Diffusion, DiffusionLaw, EquationOfState, Regularized,
    RegularizationMode,
};
pub use expr::{Expr, ParseError};
pub use reaction::{ForcingTable, ReactionTerm, SpatialField};
pub use scenario::{Declarations, FieldSpec, Partition, Scenario};
pub use validate::{
    validate_assumptions, AssumptionClass, AssumptionOutcome, AssumptionReport, Counterexample, SampleBox,
};

use crate::domain::DomainError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("`{0}` is not a polynomial in the state variables")]
    NotPolynomial(String),
    #[error("{0}")]
    Invalid(String),
    #[error("index sets: {0}")]
    Partition(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}
