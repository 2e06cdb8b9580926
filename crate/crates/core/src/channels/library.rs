//! Small catalogue of standard maps used as fixtures and building blocks.

use super::map::{LinearMap, QuantumChannel};
use crate::matcore::pauli;
use crate::matcore::{kron, ComplexMatrix};

/// `ρ ↦ Tr(ρ) I/d`.
pub fn completely_depolarizing(dim: usize) -> QuantumChannel {
    let scale = 1.0 / (dim as f64).sqrt();
    let ops = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| ComplexMatrix::unit(dim, i, j).scale_real(scale)))
        .collect();
    QuantumChannel::from_kraus(ops).expect("depolarizing Kraus set is trace preserving")
}

/// Projective measurement in the computational basis, outcome forgotten.
pub fn dephase_computational(dim: usize) -> QuantumChannel {
    let ops = (0..dim).map(|i| ComplexMatrix::unit(dim, i, i)).collect();
    QuantumChannel::from_kraus(ops).expect("projectors sum to identity")
}

/// `ρ ↦ ρᵀ`, positive but not completely positive.
pub fn transpose_map(dim: usize) -> LinearMap {
    let mut s = ComplexMatrix::zeros(dim * dim, dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            // vec(Xᵀ)[i·d + j] = X[i, j] = vec(X)[j·d + i]
            s[(i * dim + j, j * dim + i)] = num_complex::Complex64::new(1.0, 0.0);
        }
    }
    LinearMap::from_superoperator(dim, dim, s).expect("square superoperator")
}

/// Probabilistic Pauli channel `Σ p_k σ_k ρ σ_k` with `p = [p_I, p_X, p_Y, p_Z]`.
pub fn pauli_channel(probs: [f64; 4]) -> crate::error::Result<QuantumChannel> {
    let ops = pauli::basis()
        .into_iter()
        .zip(probs)
        .filter(|(_, p)| *p > 0.0)
        .map(|(s, p)| s.scale_real(p.sqrt()))
        .collect();
    QuantumChannel::from_kraus(ops)
}

/// Pauli-diagonal qubit map with transfer coefficients `[t_I, t_X, t_Y, t_Z]`,
/// i.e. `σ_k ↦ t_k σ_k`. The weights may be negative, so the result is a
/// plain map.
pub fn pauli_diagonal_map(transfer: [f64; 4]) -> LinearMap {
    let [ti, tx, ty, tz] = transfer;
    let weights = [
        (ti + tx + ty + tz) / 4.0,
        (ti + tx - ty - tz) / 4.0,
        (ti - tx + ty - tz) / 4.0,
        (ti - tx - ty + tz) / 4.0,
    ];
    let mut s = ComplexMatrix::zeros(4, 4);
    for (sigma, w) in pauli::basis().iter().zip(weights) {
        s = &s + &kron(&sigma.conj(), sigma).scale_real(w);
    }
    LinearMap::from_superoperator(2, 2, s).expect("qubit superoperator is 4x4")
}
