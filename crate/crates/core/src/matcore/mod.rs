//! Dense complex linear algebra for small matrices (up to a few hundred rows).

mod eigen;
mod matrix;
mod ops;
pub mod pauli;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use ops::{kron, kron_power, partial_trace, trace_norm, RegisterShape};
