//! Two-collision qubit dynamics parameterized by the environment
//! correlation strength ε.
//!
//! After one collision the system has undergone
//! `Λ₁(ρ) = (1−2ε)ρ + ε(ZρZ + XρX)`, after two
//! `Λ₂(ρ) = ((1−2ε)² + 4ε²)ρ + 2ε(1−2ε)(ZρZ + XρX)`.
//! Both are Pauli channels, so they are diagonal in the Pauli transfer
//! picture and the map connecting them is a ratio of transfer coefficients.

use serde::{Deserialize, Serialize};

use crate::channels::library::pauli_diagonal_map;
use crate::channels::{LinearMap, QuantumChannel};
use crate::error::{Error, Result};
use crate::matcore::pauli::{identity, sigma_x, sigma_z};

/// ε at and below which the dynamics is weakly non-Markovian.
pub const REGIME_BOUNDARY: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Intermediate map positive but not completely positive.
    Weak,
    /// Intermediate map not even positive.
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionalModel {
    epsilon: f64,
}

impl CollisionalModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in [0, 0.5], got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Kraus weights of Λ₁ on `{I, Z, X}`.
    pub fn lambda1_weights(&self) -> [f64; 3] {
        let e = self.epsilon;
        [1.0 - 2.0 * e, e, e]
    }

    /// Kraus weights of Λ₂ on `{I, Z, X}`.
    pub fn lambda2_weights(&self) -> [f64; 3] {
        let e = self.epsilon;
        let a = 1.0 - 2.0 * e;
        [a * a + 4.0 * e * e, 2.0 * e * a, 2.0 * e * a]
    }

    pub fn lambda1(&self) -> QuantumChannel {
        weighted_pauli_channel(self.lambda1_weights())
    }

    pub fn lambda2(&self) -> QuantumChannel {
        weighted_pauli_channel(self.lambda2_weights())
    }

    /// `[t_I, t_X, t_Y, t_Z]` of Λ₁: `(1, 1−2ε, 1−4ε, 1−2ε)`.
    pub fn lambda1_transfer(&self) -> [f64; 4] {
        let e = self.epsilon;
        [1.0, 1.0 - 2.0 * e, 1.0 - 4.0 * e, 1.0 - 2.0 * e]
    }

    /// `[t_I, t_X, t_Y, t_Z]` of Λ₂: `(1, (1−2ε)²+4ε², (1−4ε)², (1−2ε)²+4ε²)`.
    pub fn lambda2_transfer(&self) -> [f64; 4] {
        let e = self.epsilon;
        let xz = (1.0 - 2.0 * e).powi(2) + 4.0 * e * e;
        [1.0, xz, (1.0 - 4.0 * e).powi(2), xz]
    }

    /// Transfer coefficients of the intermediate map `V₂₁ = Λ₂ ∘ Λ₁⁻¹`.
    ///
    /// The Y ratio `(1−4ε)²/(1−4ε)` is taken in its reduced form `1−4ε`,
    /// which stays finite through ε = 0.25.
    pub fn v21_transfer(&self) -> Result<[f64; 4]> {
        let e = self.epsilon;
        let denom = 1.0 - 2.0 * e;
        if denom == 0.0 {
            return Err(Error::SingularDynamics(
                "V21 is undefined at epsilon = 0.5 (Λ₁ transfer 1−2ε vanishes)".into(),
            ));
        }
        let xz = ((1.0 - 2.0 * e).powi(2) + 4.0 * e * e) / denom;
        Ok([1.0, xz, 1.0 - 4.0 * e, xz])
    }

    /// Analytic intermediate map between the first and second collision.
    pub fn v21(&self) -> Result<LinearMap> {
        Ok(pauli_diagonal_map(self.v21_transfer()?))
    }

    pub fn regime(&self) -> Regime {
        if self.epsilon > REGIME_BOUNDARY {
            Regime::Strong
        } else {
            Regime::Weak
        }
    }
}

fn weighted_pauli_channel([w_id, w_z, w_x]: [f64; 3]) -> QuantumChannel {
    let ops = [(identity(), w_id), (sigma_z(), w_z), (sigma_x(), w_x)]
        .into_iter()
        .filter(|(_, w)| *w > 0.0)
        .map(|(s, w)| s.scale_real(w.sqrt()))
        .collect();
    QuantumChannel::from_kraus(ops).expect("collisional weights sum to one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{compose, min_choi_eig, pauli_transfer, Superoperator};
    use crate::matcore::ComplexMatrix;

    #[test]
    fn epsilon_range_enforced() {
        assert!(CollisionalModel::new(-0.01).is_err());
        assert!(CollisionalModel::new(0.51).is_err());
        assert!(CollisionalModel::new(0.5).is_ok());
        assert!(CollisionalModel::new(f64::NAN).is_err());
    }

    #[test]
    fn zero_epsilon_is_identity() {
        let m = CollisionalModel::new(0.0).unwrap();
        let id = ComplexMatrix::identity(4);
        assert!(m.lambda1().superoperator().max_abs_diff(&id) < 1e-15);
        assert!(m.lambda2().superoperator().max_abs_diff(&id) < 1e-15);
        assert!(m.v21().unwrap().superoperator().max_abs_diff(&id) < 1e-15);
    }

    #[test]
    fn lambda1_on_ground_state() {
        let m = CollisionalModel::new(0.4).unwrap();
        let out = m
            .lambda1()
            .apply(&ComplexMatrix::diag_real(&[1.0, 0.0]))
            .unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::diag_real(&[0.6, 0.4])) < 1e-15);
    }

    #[test]
    fn lambda2_weights_sum_to_one() {
        for k in 0..=100 {
            let m = CollisionalModel::new(0.005 * k as f64).unwrap();
            let s: f64 = m.lambda2_weights().iter().sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn transfer_coefficients_match_closed_forms() {
        for e in [0.0, 0.1, 0.25, 0.33, 0.5] {
            let m = CollisionalModel::new(e).unwrap();
            let t1 = pauli_transfer(&m.lambda1()).unwrap();
            let t2 = pauli_transfer(&m.lambda2()).unwrap();
            for k in 0..4 {
                assert!((t1.coefficients[k] - m.lambda1_transfer()[k]).abs() < 1e-14);
                assert!((t2.coefficients[k] - m.lambda2_transfer()[k]).abs() < 1e-14);
            }
            assert!(t1.off_diagonal_residual < 1e-15 && t2.off_diagonal_residual < 1e-15);
        }
    }

    #[test]
    fn v21_divides_lambda2() {
        for e in [0.1, 0.25, 0.4] {
            let m = CollisionalModel::new(e).unwrap();
            let composed = compose(&m.v21().unwrap(), &m.lambda1()).unwrap();
            let diff = composed
                .superoperator()
                .max_abs_diff(m.lambda2().superoperator());
            assert!(diff < 1e-12, "eps {e}: {diff}");
        }
    }

    #[test]
    fn v21_singular_at_half() {
        let m = CollisionalModel::new(0.5).unwrap();
        assert!(matches!(m.v21(), Err(Error::SingularDynamics(_))));
    }

    #[test]
    fn v21_choi_minimum_at_tenth() {
        // transfer (1, 0.85, 0.6, 0.85): Bell-basis weight (1 − 0.85 + 0.6 − 0.85)/4
        let m = CollisionalModel::new(0.1).unwrap();
        let z = min_choi_eig(&m.v21().unwrap()).unwrap();
        assert!((z + 0.025).abs() < 1e-13, "{z}");
    }

    #[test]
    fn regimes() {
        let r = |e| CollisionalModel::new(e).unwrap().regime();
        assert_eq!(r(0.4), Regime::Strong);
        assert_eq!(r(0.2), Regime::Weak);
        assert_eq!(r(0.25), Regime::Weak);
    }
}
