use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{validate_epsilon, UnitarySource};
use crate::coarse::{CoarseGrainingMap, MAX_COPIES};
use crate::collisional::CollisionalModel;
use crate::error::{Error, Result};
use crate::witness::{zeta_report, ZetaMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigScanConfig {
    pub epsilons: Vec<f64>,
    pub modes: Vec<ZetaMode>,
    pub copies: Vec<usize>,
    pub unitary: UnitarySource,
}

impl EigScanConfig {
    /// `count` points `lo + k·step`, `k = 1..=count`, rounded to the step's
    /// decimal grid so that 0.26 is 0.26 and not 0.26000000000000001.
    pub fn epsilon_grid(lo: f64, step: f64, count: usize) -> Vec<f64> {
        (1..=count)
            .map(|k| ((lo + step * k as f64) * 1e9).round() / 1e9)
            .collect()
    }

    /// 24 points in `(0.25, 0.49]`.
    pub fn strong_grid() -> Vec<f64> {
        Self::epsilon_grid(0.25, 0.01, 24)
    }

    /// 25 points in `(0, 0.25]`.
    pub fn weak_grid() -> Vec<f64> {
        Self::epsilon_grid(0.0, 0.01, 25)
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() || self.modes.is_empty() {
            return Err(Error::Config(
                "eigscan needs at least one epsilon and one mode".into(),
            ));
        }
        for &e in &self.epsilons {
            validate_epsilon(e, true)?;
        }
        let needs_copies = self.modes.iter().any(|m| *m != ZetaMode::Single);
        if needs_copies && self.copies.is_empty() {
            return Err(Error::Config(
                "tensor and distilled modes need a copy count".into(),
            ));
        }
        for &n in &self.copies {
            if !(1..=MAX_COPIES).contains(&n) {
                return Err(Error::Config(format!(
                    "copies {n} outside 1..={MAX_COPIES}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for EigScanConfig {
    fn default() -> Self {
        let mut epsilons = Self::weak_grid();
        epsilons.extend(Self::strong_grid());
        Self {
            epsilons,
            modes: ZetaMode::ALL.to_vec(),
            copies: vec![2, 3, 4],
            unitary: UnitarySource::Pattern,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigScanRow {
    pub epsilon: f64,
    /// 1 for the single-copy mode.
    pub copies: usize,
    pub mode: ZetaMode,
    pub zeta: f64,
}

/// ζ rows per ε: the single-copy value once, then tensor and distilled
/// values for each configured copy count.
pub fn eig_scan(cfg: &EigScanConfig) -> Result<Vec<EigScanRow>> {
    cfg.validate()?;
    let wants = |m| cfg.modes.contains(&m);
    let decoders: Vec<Option<CoarseGrainingMap>> = cfg
        .copies
        .iter()
        .map(|&n| {
            if wants(ZetaMode::Distilled) {
                cfg.unitary.decoder(n).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;

    let per_eps: Vec<Vec<EigScanRow>> = cfg
        .epsilons
        .par_iter()
        .map(|&epsilon| {
            let model = CollisionalModel::new(epsilon)?;
            let mut rows = Vec::new();
            let mut push = |copies, mode, lambda: Option<&CoarseGrainingMap>| -> Result<()> {
                let zeta = zeta_report(&model, lambda, copies, mode)?;
                rows.push(EigScanRow {
                    epsilon,
                    copies,
                    mode,
                    zeta,
                });
                Ok(())
            };
            if wants(ZetaMode::Single) {
                push(1, ZetaMode::Single, None)?;
            }
            for (&n, decoder) in cfg.copies.iter().zip(&decoders) {
                if wants(ZetaMode::Tensor) {
                    push(n, ZetaMode::Tensor, None)?;
                }
                if let Some(d) = decoder {
                    push(n, ZetaMode::Distilled, Some(d))?;
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_eps.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        let s = EigScanConfig::strong_grid();
        assert_eq!(s.len(), 24);
        assert_eq!((s[0], s[23]), (0.26, 0.49));
        let w = EigScanConfig::weak_grid();
        assert_eq!(w.len(), 25);
        assert_eq!((w[0], w[24]), (0.01, 0.25));
    }

    #[test]
    fn zero_epsilon_all_zero() {
        let cfg = EigScanConfig {
            epsilons: vec![0.0],
            ..EigScanConfig::default()
        };
        let rows = eig_scan(&cfg).unwrap();
        assert_eq!(rows.len(), 1 + 2 * 3);
        for r in rows {
            assert!(r.zeta.abs() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn half_excluded() {
        let cfg = EigScanConfig {
            epsilons: vec![0.5],
            ..EigScanConfig::default()
        };
        assert!(matches!(eig_scan(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn strong_point_values() {
        let cfg = EigScanConfig {
            epsilons: vec![0.4],
            copies: vec![2],
            ..EigScanConfig::default()
        };
        let rows = eig_scan(&cfg).unwrap();
        let z: Vec<f64> = rows.iter().map(|r| r.zeta).collect();
        assert_eq!(
            rows.iter().map(|r| r.mode).collect::<Vec<_>>(),
            ZetaMode::ALL.to_vec()
        );
        for (got, want) in z.iter().zip([-1.6, -2.88, -0.96]) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }
}
