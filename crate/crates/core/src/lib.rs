//! Numerical toolkit for quasilinear parabolic systems whose boundary carries
//! its own dynamics (Wentzell / dynamic boundary conditions).

pub mod analysis;
pub mod domain;
pub mod linalg;
pub mod model;
pub(crate) mod quadrature;
pub mod scalar;
pub mod solver;
pub mod spectral;
pub mod waves;

pub use domain::{
    build_mesh, total_mass, BoundaryNode, BoundaryPart, DomainError, Face, FieldState, FieldValues,
    Mesh, Region, Side, SideLabels,
};
pub use scalar::Real;

pub type Mesh64 = Mesh<f64>;
pub type FieldValues64 = FieldValues<f64>;
pub type FieldState64 = FieldState<f64>;
