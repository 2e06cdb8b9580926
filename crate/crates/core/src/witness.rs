//! Non-Markovianity witnesses.
//!
//! Two markers are computed and never merged into one score:
//! * distinguishability backflow `ΔD` (single copy) and `ΔDₙ` (n copies
//!   through a coarse-graining map), positive values witness memory effects;
//! * ζ, the least eigenvalue of the normalized Choi matrix of an
//!   intermediate map, negative values witness non-CP-divisibility.

use serde::{Deserialize, Serialize};

use crate::channels::{compose, min_choi_eig, QuantumChannel, Superoperator};
use crate::coarse::CoarseGrainingMap;
use crate::collisional::CollisionalModel;
use crate::error::{Error, Result};
use crate::matcore::pauli::bloch_state_polar;
use crate::matcore::{kron_power, trace_norm, ComplexMatrix};

/// Pure orthogonal qubit states with antipodal Bloch vectors along
/// `(sinθ cosφ, sinθ sinφ, cosθ)`.
#[derive(Debug, Clone)]
pub struct StatePair {
    pub theta: f64,
    pub phi: f64,
    pub rho1: ComplexMatrix,
    pub rho2: ComplexMatrix,
}

pub fn bloch_pair(theta: f64, phi: f64) -> StatePair {
    StatePair {
        theta,
        phi,
        rho1: bloch_state_polar(1.0, theta, phi),
        rho2: bloch_state_polar(-1.0, theta, phi),
    }
}

/// `½‖ρ₂ − ρ₁‖₁`.
pub fn distinguishability(rho1: &ComplexMatrix, rho2: &ComplexMatrix) -> Result<f64> {
    Ok(0.5 * trace_norm(&(rho2 - rho1))?)
}

/// `½(‖Λ₂(ρ₂−ρ₁)‖₁ − ‖Λ₁(ρ₂−ρ₁)‖₁)`.
pub fn delta_d(model: &CollisionalModel, pair: &StatePair) -> Result<f64> {
    delta_d_for(&model.lambda1(), &model.lambda2(), pair)
}

/// [`delta_d`] for an arbitrary pair of dynamical snapshots.
pub fn delta_d_for(
    earlier: &dyn Superoperator,
    later: &dyn Superoperator,
    pair: &StatePair,
) -> Result<f64> {
    let diff = &pair.rho2 - &pair.rho1;
    let late = trace_norm(&later.apply(&diff)?)?;
    let early = trace_norm(&earlier.apply(&diff)?)?;
    Ok(0.5 * (late - early))
}

/// Closed-form ΔD for the collisional model.
pub fn analytic_delta_d(epsilon: f64, theta: f64, phi: f64) -> f64 {
    let e = epsilon;
    let angular = (2.0 * theta).cos() + 2.0 * (2.0 * phi).cos() * theta.sin().powi(2);
    let first = (2.0 + 2.0 * e * (-5.0 + 7.0 * e) - 2.0 * e * (-1.0 + 3.0 * e) * angular)
        .abs()
        .sqrt();
    let g = e * (-1.0 + 2.0 * e);
    let second = (1.0 + 2.0 * g * (5.0 + 14.0 * g) - 2.0 * g * (1.0 + 6.0 * g) * angular)
        .abs()
        .sqrt();
    -std::f64::consts::SQRT_2 / 2.0 * first + second
}

/// n-copy backflow through the coarse-graining channel `lambda`:
/// `½(‖λ∘Λ₂^⊗n(Δₙ)‖₁ − ‖λ∘Λ₁^⊗n(Δₙ)‖₁)`, `Δₙ = ρ₂^⊗n − ρ₁^⊗n`.
///
/// By linearity `Λ^⊗n(Δₙ) = Λ(ρ₂)^⊗n − Λ(ρ₁)^⊗n`, which avoids forming the
/// n-fold channel.
pub fn delta_d_n(
    model: &CollisionalModel,
    lambda: &QuantumChannel,
    pair: &StatePair,
) -> Result<f64> {
    delta_d_n_for(&model.lambda1(), &model.lambda2(), lambda, pair)
}

pub fn delta_d_n_for(
    earlier: &dyn Superoperator,
    later: &dyn Superoperator,
    lambda: &QuantumChannel,
    pair: &StatePair,
) -> Result<f64> {
    let n = copies_of(lambda)?;
    let evolved_norm = |map: &dyn Superoperator| -> Result<f64> {
        let a = kron_power(&map.apply(&pair.rho2)?, n);
        let b = kron_power(&map.apply(&pair.rho1)?, n);
        trace_norm(&lambda.apply(&(&a - &b))?)
    };
    Ok(0.5 * (evolved_norm(later)? - evolved_norm(earlier)?))
}

fn copies_of(lambda: &QuantumChannel) -> Result<usize> {
    let din = lambda.dim_in();
    if lambda.dim_out() != 2 || !din.is_power_of_two() || din < 2 {
        return Err(Error::DimensionMismatch(format!(
            "coarse-graining must map 2^n -> 2, got {din} -> {}",
            lambda.dim_out()
        )));
    }
    Ok(din.trailing_zeros() as usize)
}

/// Closed-form two-copy backflow for an X-form dilation with diagonal
/// entries `u1, u13` and anti-diagonal entries `v4, v16` (1-based labels).
pub fn analytic_delta_d2(epsilon: f64, theta: f64, u1: f64, u13: f64, v4: f64, v16: f64) -> f64 {
    let e = epsilon;
    let dynamics = (1.0 - 2.0 * e).abs() - (1.0 - 4.0 * e + 8.0 * e * e).abs();
    let dilation = (u1 * u1 - u13 * u13).abs() + (v16 * v16 - v4 * v4).abs();
    -0.5 * dynamics * dilation * theta.cos().abs()
}

/// Which intermediate map ζ is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZetaMode {
    /// `V₂₁`
    Single,
    /// `V₂₁^⊗n`
    Tensor,
    /// `λ ∘ V₂₁^⊗n`
    Distilled,
}

impl ZetaMode {
    pub const ALL: [ZetaMode; 3] = [ZetaMode::Single, ZetaMode::Tensor, ZetaMode::Distilled];

    pub fn as_str(&self) -> &'static str {
        match self {
            ZetaMode::Single => "single",
            ZetaMode::Tensor => "tensor",
            ZetaMode::Distilled => "distilled",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(ZetaMode::Single),
            "tensor" => Ok(ZetaMode::Tensor),
            "distilled" => Ok(ZetaMode::Distilled),
            other => Err(Error::Parse(format!("unknown zeta mode '{other}'"))),
        }
    }
}

/// ζ of `V₂₁`, `V₂₁^⊗n` or `λ ∘ V₂₁^⊗n`.
pub fn zeta_report(
    model: &CollisionalModel,
    lambda: Option<&CoarseGrainingMap>,
    copies: usize,
    mode: ZetaMode,
) -> Result<f64> {
    let v = model.v21()?;
    match mode {
        ZetaMode::Single => min_choi_eig(&v),
        ZetaMode::Tensor => min_choi_eig(&v.tensor_power(copies)?),
        ZetaMode::Distilled => {
            let lambda = lambda.ok_or_else(|| {
                Error::InvalidParameter("distilled zeta needs a coarse-graining map".into())
            })?;
            if lambda.copies() != copies {
                return Err(Error::InvalidParameter(format!(
                    "coarse-graining map takes {} copies, asked for {copies}",
                    lambda.copies()
                )));
            }
            let distilled = compose(lambda.channel(), &v.tensor_power(copies)?)?;
            min_choi_eig(&distilled)
        }
    }
}

/// Witness values for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub epsilon: f64,
    pub copies: usize,
    pub unitary: String,
    pub theta: f64,
    pub phi: f64,
    pub delta_d: f64,
    pub delta_d_n: f64,
    pub zeta_single: Option<f64>,
    pub zeta_tensor: Option<f64>,
    pub zeta_distilled: Option<f64>,
}

impl WitnessReport {
    pub fn diff(&self) -> f64 {
        self.delta_d_n - self.delta_d
    }
}

/// Full report including the three ζ values (fails at ε = 0.5).
pub fn witness_report(
    model: &CollisionalModel,
    lambda: &CoarseGrainingMap,
    theta: f64,
    phi: f64,
) -> Result<WitnessReport> {
    let pair = bloch_pair(theta, phi);
    let n = lambda.copies();
    Ok(WitnessReport {
        epsilon: model.epsilon(),
        copies: n,
        unitary: lambda.label().to_string(),
        theta,
        phi,
        delta_d: delta_d(model, &pair)?,
        delta_d_n: delta_d_n(model, lambda.channel(), &pair)?,
        zeta_single: Some(zeta_report(model, None, n, ZetaMode::Single)?),
        zeta_tensor: Some(zeta_report(model, None, n, ZetaMode::Tensor)?),
        zeta_distilled: Some(zeta_report(model, Some(lambda), n, ZetaMode::Distilled)?),
    })
}
