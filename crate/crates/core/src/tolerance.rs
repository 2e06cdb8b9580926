//! Numerical tolerances shared across the crate.

/// Hermiticity check before eigendecomposition: max |A − A†| entry.
pub const TOL_HERM: f64 = 1e-10;

/// Entrywise equality of matrices built along exact algebraic routes.
pub const TOL_EQ: f64 = 1e-12;

/// Positive-semidefiniteness slack for Choi eigenvalues.
pub const TOL_PSD: f64 = 1e-10;

/// Trace-preservation tolerance when accepting Kraus lists.
pub const TOL_KRAUS_TP: f64 = 1e-8;

/// Smallest singular value of a superoperator before inversion is refused.
pub const TOL_SINGULAR: f64 = 1e-9;

/// Unitarity tolerance for coarse-graining dilations.
pub const TOL_UNITARY: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which Jacobi stops, relative to ‖A‖_F.
pub const JACOBI_OFF_TOL: f64 = 1e-12;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Largest Choi matrix dimension a tensor power may produce.
pub const MAX_CHOI_DIM: usize = 256;
