//! Wentzell eigenproblems: the eigenvalue appears both in the bulk equation
//! and in the Γ1 boundary condition, giving a symmetric pencil `(K, M)` whose
//! mass `M` carries bulk and surface weights.

mod assemble;
mod rayleigh;
mod solve;
mod stability;
mod weight;

pub use assemble::{assemble_wentzell, EigenSystem, GeneralizedCoefficients, Variant};
pub use rayleigh::{rayleigh_quotient, Denominator};
pub use solve::{ground_state, solve_spectrum, Correction, EigenPair, GroundState, SolveOptions};
pub use stability::{
    direct_linearized_spectrum, instability_index, lambda1_inf, linearized_spectrum, IndexMethod,
    IndexSource, Lambda1,
};
pub use weight::ground_state_weight;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("every node is constrained; the pencil is empty")]
    Empty,
    #[error("requested {requested} eigenpairs from a system of size {size}")]
    TooMany { requested: usize, size: usize },
    #[error("eigensolver did not converge: {0}")]
    Convergence(String),
    #[error("ground state check failed: {0}")]
    GroundState(String),
    #[error("zero vector has no Rayleigh quotient")]
    ZeroVector,
    #[error("{0}")]
    Input(String),
}
