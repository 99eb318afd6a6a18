//! Small dense, banded and tridiagonal kernels used by the solver and the
//! eigenproblem code. Everything is generic over [`Real`](crate::Real).

pub mod banded;
pub mod dense;
pub mod tridiagonal;

pub use banded::BandMatrix;
pub use dense::{symmetric_eigen, DenseMatrix};
pub use tridiagonal::SymTridiagonal;
