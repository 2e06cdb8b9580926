//! Single-qubit Pauli matrices and Bloch-vector states.

use num_complex::Complex64;

use super::ComplexMatrix;

pub fn identity() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn sigma_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), -i],
        vec![i, Complex64::new(0.0, 0.0)],
    ])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}

/// `[I, X, Y, Z]`.
pub fn basis() -> [ComplexMatrix; 4] {
    [identity(), sigma_x(), sigma_y(), sigma_z()]
}

/// `(I + r·σ) / 2` for a Bloch vector `r = (x, y, z)`.
pub fn bloch_state(x: f64, y: f64, z: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
        ],
        vec![
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    ])
}

/// Bloch state with signed radius `r` along `(sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn bloch_state_polar(r: f64, theta: f64, phi: f64) -> ComplexMatrix {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    bloch_state(r * st * cp, r * st * sp, r * ct)
}
