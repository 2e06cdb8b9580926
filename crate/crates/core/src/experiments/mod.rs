//! Reproduction harness: grid sweeps, maxima search, ζ scans, the
//! coarse-graining-only study and the X-form optimizer.
//!
//! Independent work items run on the rayon pool; results are always
//! collected in input order, so outputs do not depend on the thread count.

mod appendix_b;
mod eigscan;
mod maxima;
mod optimize;
pub mod rng;
mod sweep;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coarse::{CoarseGrainingMap, XFormParams};
use crate::error::{Error, Result};

pub use appendix_b::{appendix_b, AppendixBCase, AppendixBRow};
pub use eigscan::{eig_scan, EigScanConfig, EigScanRow};
pub use maxima::{max_diff, ArgMax, MaximaReport};
pub use optimize::{optimize_unitary, Objective, OptimizeConfig, OptimizeResult, RestartOutcome};
pub use sweep::{grid_sweep, BackflowEvaluator, SweepConfig};

pub const DEFAULT_THETA_POINTS: usize = 181;
pub const DEFAULT_PHI_POINTS: usize = 361;

/// Where the coarse-graining dilation comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitarySource {
    /// The fixed 16×16 permutation; two copies only.
    Paper16,
    /// Block 0 fixed, all other blocks swapped; any copy count. Two copies
    /// resolve to `Paper16`, which induces the same channel.
    Pattern,
    /// Data qubit swapped into the output; one copy only, λ = id.
    Identity,
    /// Explicit X-form block angles.
    Angles(XFormParams),
}

impl UnitarySource {
    pub fn decoder(&self, copies: usize) -> Result<CoarseGrainingMap> {
        match self {
            UnitarySource::Paper16 => {
                require_copies("paper16", copies, 2)?;
                Ok(CoarseGrainingMap::paper16())
            }
            UnitarySource::Pattern if copies == 2 => Ok(CoarseGrainingMap::paper16()),
            UnitarySource::Pattern => CoarseGrainingMap::paper_pattern(copies),
            UnitarySource::Identity => {
                require_copies("identity", copies, 1)?;
                Ok(CoarseGrainingMap::identity_decoder())
            }
            UnitarySource::Angles(params) => {
                let map = CoarseGrainingMap::from_xform(params, "angles")?;
                require_copies("angle file", copies, map.copies())?;
                Ok(map)
            }
        }
    }
}

fn require_copies(source: &str, copies: usize, expected: usize) -> Result<()> {
    if copies != expected {
        return Err(Error::Config(format!(
            "unitary source {source} supports {expected} copies, configured {copies}"
        )));
    }
    Ok(())
}

/// `points` equally spaced values on `[lo, hi]`; a single point sits at `lo`.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = (points - 1) as f64;
            (0..points)
                .map(|k| {
                    if k + 1 == points {
                        hi
                    } else {
                        lo + (hi - lo) * (k as f64 / last)
                    }
                })
                .collect()
        }
    }
}

pub fn theta_grid(points: usize) -> Vec<f64> {
    linspace(0.0, PI, points)
}

pub fn phi_grid(points: usize) -> Vec<f64> {
    linspace(0.0, 2.0 * PI, points)
}

fn validate_epsilon(e: f64, upper_exclusive: bool) -> Result<()> {
    let ok = e.is_finite() && e >= 0.0 && if upper_exclusive { e < 0.5 } else { e <= 0.5 };
    if ok {
        Ok(())
    } else {
        let range = if upper_exclusive {
            "[0, 0.5)"
        } else {
            "[0, 0.5]"
        };
        Err(Error::Config(format!("epsilon {e} outside {range}")))
    }
}

fn validate_points(name: &str, points: usize) -> Result<()> {
    if points == 0 {
        return Err(Error::Config(format!("{name} grid must be nonempty")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints_exact() {
        let g = linspace(0.0, PI, 181);
        assert_eq!(g.len(), 181);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[180], PI);
        assert_eq!(g[90], PI / 2.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }

    #[test]
    fn decoder_copy_checks() {
        assert!(UnitarySource::Paper16.decoder(3).is_err());
        assert!(UnitarySource::Identity.decoder(2).is_err());
        assert_eq!(UnitarySource::Pattern.decoder(3).unwrap().copies(), 3);
        assert_eq!(
            UnitarySource::Pattern.decoder(2).unwrap().label(),
            "paper16"
        );
        let p = XFormParams::paper_pattern(32).unwrap();
        assert!(UnitarySource::Angles(p.clone()).decoder(2).is_err());
        assert_eq!(UnitarySource::Angles(p).decoder(3).unwrap().copies(), 3);
    }
}
