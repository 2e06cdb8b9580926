use serde::Serialize;

use super::map::{LinearMap, Superoperator};
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigenvalues, pauli, ComplexMatrix};
use crate::tolerance::TOL_SINGULAR;

/// Smallest singular value of a map's superoperator.
pub fn smallest_singular_value(map: &dyn Superoperator) -> Result<f64> {
    let s = map.superoperator();
    let gram = &s.dagger() * s;
    let vals = hermitian_eigenvalues(&gram)?;
    Ok(vals[0].max(0.0).sqrt())
}

/// The map `V` with `V ∘ earlier = later`, i.e. `V = S_later · S_earlier⁻¹`.
///
/// Fails with `SingularDynamics` when `earlier` is not invertible to within
/// `TOL_SINGULAR`; callers with an analytic intermediate map should use it.
pub fn intermediate_map(
    later: &dyn Superoperator,
    earlier: &dyn Superoperator,
) -> Result<LinearMap> {
    if earlier.dim_in() != earlier.dim_out() {
        return Err(Error::DimensionMismatch(
            "intermediate maps need a square earlier map".into(),
        ));
    }
    if later.dim_in() != earlier.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "maps act on different inputs ({} vs {})",
            later.dim_in(),
            earlier.dim_in()
        )));
    }
    let sigma_min = smallest_singular_value(earlier)?;
    if sigma_min < TOL_SINGULAR {
        return Err(Error::SingularDynamics(format!(
            "smallest singular value {sigma_min:.3e} of the earlier map is below {TOL_SINGULAR:.0e}"
        )));
    }
    let inverse = earlier.superoperator().inverse(TOL_SINGULAR * 1e-3)?;
    LinearMap::from_superoperator(
        earlier.dim_out(),
        later.dim_out(),
        later.superoperator().matmul(&inverse)?,
    )
}

/// Diagonal Pauli transfer coefficients of a qubit map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliTransfer {
    /// `[t_I, t_X, t_Y, t_Z]` with `t_k = ½ Re Tr(σ_k Λ(σ_k))`.
    pub coefficients: [f64; 4],
    /// Frobenius norm of the off-diagonal transfer entries plus any
    /// imaginary part of the diagonal.
    pub off_diagonal_residual: f64,
}

pub fn pauli_transfer(map: &dyn Superoperator) -> Result<PauliTransfer> {
    if map.dim_in() != 2 || map.dim_out() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Pauli transfer needs a qubit map, got {}->{}",
            map.dim_in(),
            map.dim_out()
        )));
    }
    let basis = pauli::basis();
    let images: Vec<ComplexMatrix> = basis.iter().map(|s| map.apply(s)).collect::<Result<_>>()?;
    let mut coefficients = [0.0; 4];
    let mut residual = 0.0;
    for (i, si) in basis.iter().enumerate() {
        for (j, image) in images.iter().enumerate() {
            let r = (si * image).trace() * 0.5;
            if i == j {
                coefficients[i] = r.re;
                residual += r.im * r.im;
            } else {
                residual += r.norm_sqr();
            }
        }
    }
    Ok(PauliTransfer {
        coefficients,
        off_diagonal_residual: residual.sqrt(),
    })
}
