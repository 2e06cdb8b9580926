use serde::Serialize;

use super::map::{LinearMap, Superoperator};
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigenvalues, ComplexMatrix};

/// Normalized Choi matrix `(I ⊗ Λ)(|φ₊⟩⟨φ₊|)` with `|φ₊⟩ = Σ|ii⟩/√d_in`.
///
/// The input factor comes first: entry `[(i·d_out + a), (j·d_out + b)]`
/// equals `Λ(|i⟩⟨j|)[a, b] / d_in`.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub dim_in: usize,
    pub dim_out: usize,
}

pub fn to_choi(map: &dyn Superoperator) -> ChoiMatrix {
    let (din, dout) = (map.dim_in(), map.dim_out());
    let s = map.superoperator();
    let norm = 1.0 / din as f64;
    let mut c = ComplexMatrix::zeros(din * dout, din * dout);
    for i in 0..din {
        for j in 0..din {
            for a in 0..dout {
                for b in 0..dout {
                    c[(i * dout + a, j * dout + b)] = s[(b * dout + a, j * din + i)] * norm;
                }
            }
        }
    }
    ChoiMatrix {
        matrix: c,
        dim_in: din,
        dim_out: dout,
    }
}

impl LinearMap {
    /// Inverse of [`to_choi`].
    pub fn from_choi(choi: &ChoiMatrix) -> Result<LinearMap> {
        let (din, dout) = (choi.dim_in, choi.dim_out);
        if choi.matrix.rows() != din * dout || !choi.matrix.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "Choi matrix for {din}->{dout} must be {0}x{0}",
                din * dout
            )));
        }
        let mut s = ComplexMatrix::zeros(dout * dout, din * din);
        for i in 0..din {
            for j in 0..din {
                for a in 0..dout {
                    for b in 0..dout {
                        s[(b * dout + a, j * din + i)] =
                            choi.matrix[(i * dout + a, j * dout + b)] * din as f64;
                    }
                }
            }
        }
        LinearMap::from_superoperator(din, dout, s)
    }
}

/// Least eigenvalue of the normalized Choi matrix (ζ).
pub fn min_choi_eig(map: &dyn Superoperator) -> Result<f64> {
    let choi = to_choi(map);
    let vals = hermitian_eigenvalues(&choi.matrix)?;
    Ok(vals[0])
}

/// Max entry of `|Tr Λ(|i⟩⟨j|) − δ_ij|`.
pub fn trace_preservation_defect(map: &dyn Superoperator) -> f64 {
    let (din, dout) = (map.dim_in(), map.dim_out());
    let s = map.superoperator();
    let mut worst: f64 = 0.0;
    for i in 0..din {
        for j in 0..din {
            let tr: num_complex::Complex64 =
                (0..dout).map(|a| s[(a * dout + a, j * din + i)]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((tr - target).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CptpReport {
    pub is_cptp: bool,
    pub min_choi_eig: f64,
    pub tp_defect: f64,
    /// Largest entry of `|C − C†|`; maps that do not preserve Hermiticity
    /// report `NaN` for `min_choi_eig`.
    pub hermiticity_defect: f64,
}

/// CP via Choi positivity and TP via partial traces, both at `tol`.
pub fn is_cptp(map: &dyn Superoperator, tol: f64) -> CptpReport {
    let choi = to_choi(map);
    let hermiticity_defect = choi.matrix.hermiticity_defect();
    let min_choi_eig = hermitian_eigenvalues(&choi.matrix)
        .map(|v| v[0])
        .unwrap_or(f64::NAN);
    let tp_defect = trace_preservation_defect(map);
    CptpReport {
        is_cptp: min_choi_eig >= -tol && tp_defect <= tol,
        min_choi_eig,
        tp_defect,
        hermiticity_defect,
    }
}
