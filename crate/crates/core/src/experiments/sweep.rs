use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{phi_grid, theta_grid, validate_epsilon, validate_points, UnitarySource};
use super::{DEFAULT_PHI_POINTS, DEFAULT_THETA_POINTS};
use crate::channels::QuantumChannel;
use crate::coarse::CoarseGrainingMap;
use crate::collisional::CollisionalModel;
use crate::error::{Error, Result};
use crate::witness::{
    bloch_pair, delta_d_for, delta_d_n_for, zeta_report, WitnessReport, ZetaMode,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
    pub copies: usize,
    pub unitary: UnitarySource,
    pub theta_points: usize,
    pub phi_points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            epsilons: vec![0.4],
            copies: 2,
            unitary: UnitarySource::Paper16,
            theta_points: DEFAULT_THETA_POINTS,
            phi_points: DEFAULT_PHI_POINTS,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return Err(Error::Config("epsilon list must be nonempty".into()));
        }
        for &e in &self.epsilons {
            validate_epsilon(e, false)?;
        }
        validate_points("theta", self.theta_points)?;
        validate_points("phi", self.phi_points)?;
        self.unitary.decoder(self.copies).map(|_| ())
    }
}

/// ΔD and ΔDₙ at fixed ε and decoder.
#[derive(Debug, Clone)]
pub struct BackflowEvaluator {
    model: CollisionalModel,
    lambda1: QuantumChannel,
    lambda2: QuantumChannel,
    decoder: CoarseGrainingMap,
}

impl BackflowEvaluator {
    pub fn new(model: CollisionalModel, decoder: CoarseGrainingMap) -> Self {
        Self {
            lambda1: model.lambda1(),
            lambda2: model.lambda2(),
            model,
            decoder,
        }
    }

    pub fn model(&self) -> &CollisionalModel {
        &self.model
    }

    pub fn decoder(&self) -> &CoarseGrainingMap {
        &self.decoder
    }

    /// `(ΔD, ΔDₙ)` for the antipodal pure pair at `(θ, φ)`.
    pub fn eval(&self, theta: f64, phi: f64) -> Result<(f64, f64)> {
        let pair = bloch_pair(theta, phi);
        let dd = delta_d_for(&self.lambda1, &self.lambda2, &pair)?;
        let ddn = delta_d_n_for(&self.lambda1, &self.lambda2, self.decoder.channel(), &pair)?;
        Ok((dd, ddn))
    }

    /// `ΔDₙ − ΔD`.
    pub fn gain(&self, theta: f64, phi: f64) -> Result<f64> {
        let (dd, ddn) = self.eval(theta, phi)?;
        Ok(ddn - dd)
    }
}

/// One row per `(ε, θ, φ)`, ordered ε-major then θ then φ.
///
/// ζ columns are filled per ε and left empty at ε = 0.5, where the
/// intermediate map does not exist.
pub fn grid_sweep(cfg: &SweepConfig) -> Result<Vec<WitnessReport>> {
    cfg.validate()?;
    let decoder = cfg.unitary.decoder(cfg.copies)?;
    let thetas = theta_grid(cfg.theta_points);
    let phis = phi_grid(cfg.phi_points);
    let per_eps = thetas.len() * phis.len();
    let mut rows = Vec::with_capacity(per_eps * cfg.epsilons.len());
    for &e in &cfg.epsilons {
        let model = CollisionalModel::new(e)?;
        let zeta = |mode| -> Result<Option<f64>> {
            if e >= 0.5 {
                Ok(None)
            } else {
                zeta_report(&model, Some(&decoder), cfg.copies, mode).map(Some)
            }
        };
        let (zs, zt, zd) = (
            zeta(ZetaMode::Single)?,
            zeta(ZetaMode::Tensor)?,
            zeta(ZetaMode::Distilled)?,
        );
        let eval = BackflowEvaluator::new(model, decoder.clone());
        let chunk: Vec<WitnessReport> = (0..per_eps)
            .into_par_iter()
            .map(|k| {
                let (theta, phi) = (thetas[k / phis.len()], phis[k % phis.len()]);
                let (delta_d, delta_d_n) = eval.eval(theta, phi)?;
                Ok(WitnessReport {
                    epsilon: e,
                    copies: cfg.copies,
                    unitary: decoder.label().to_string(),
                    theta,
                    phi,
                    delta_d,
                    delta_d_n,
                    zeta_single: zs,
                    zeta_tensor: zt,
                    zeta_distilled: zd,
                })
            })
            .collect::<Result<_>>()?;
        rows.extend(chunk);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(eps: Vec<f64>) -> SweepConfig {
        SweepConfig {
            epsilons: eps,
            theta_points: 19,
            phi_points: 37,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn row_count_and_order() {
        let rows = grid_sweep(&small(vec![0.1, 0.4])).unwrap();
        assert_eq!(rows.len(), 2 * 19 * 37);
        assert_eq!(rows[0].epsilon, 0.1);
        assert_eq!(rows[37].theta, theta_grid(19)[1]);
        assert_eq!(rows[1].phi, phi_grid(37)[1]);
        assert_eq!(rows[19 * 37].epsilon, 0.4);
    }

    #[test]
    fn zero_epsilon_rows_vanish() {
        for r in grid_sweep(&small(vec![0.0])).unwrap() {
            assert!(r.delta_d.abs() < 1e-15 && r.delta_d_n.abs() < 1e-15);
            assert!(r.zeta_single.unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn half_epsilon_has_no_zeta() {
        let rows = grid_sweep(&small(vec![0.5])).unwrap();
        assert!(rows.iter().all(|r| r.zeta_single.is_none()));
    }

    #[test]
    fn invalid_configs() {
        assert!(grid_sweep(&small(vec![])).is_err());
        assert!(grid_sweep(&small(vec![0.7])).is_err());
        let mut cfg = small(vec![0.1]);
        cfg.theta_points = 0;
        assert!(matches!(grid_sweep(&cfg), Err(Error::Config(_))));
        cfg.theta_points = 3;
        cfg.copies = 3;
        assert!(grid_sweep(&cfg).is_err());
    }
}
