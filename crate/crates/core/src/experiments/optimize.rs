use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::SplitMix64;
use super::{phi_grid, theta_grid, validate_epsilon, validate_points};
use crate::channels::Superoperator;
use crate::coarse::{CoarseGrainingMap, XFormParams};
use crate::collisional::CollisionalModel;
use crate::error::{Error, Result};
use crate::matcore::{kron_power, trace_norm, ComplexMatrix};
use crate::witness::{bloch_pair, delta_d_for};

/// Pattern search stops once the step falls below this.
pub const MIN_STEP: f64 = 1e-4;
/// A probe must beat the incumbent by more than this to be accepted.
const IMPROVE_EPS: f64 = 1e-12;
/// ΔDₙ varying less than this over φ counts as φ-independent.
const PHI_PROBE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Grid maximum of ΔDₙ.
    MaxDeltaN,
    /// Grid maximum of ΔDₙ − ΔD.
    MaxGain,
}

impl Objective {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "max_delta_n" | "max-delta-n" => Ok(Objective::MaxDeltaN),
            "max_gain" | "max-gain" => Ok(Objective::MaxGain),
            other => Err(Error::Parse(format!("unknown objective '{other}'"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::MaxDeltaN => "max_delta_n",
            Objective::MaxGain => "max_gain",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub copies: usize,
    pub epsilon: f64,
    pub objective: Objective,
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub initial_step: f64,
    pub shrink: f64,
    /// Coarse θ grid the objective is maximized over.
    pub theta_points: usize,
    /// Coarse φ grid, used only when ΔDₙ depends on φ.
    pub phi_points: usize,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            copies: 3,
            epsilon: 0.4,
            objective: Objective::MaxDeltaN,
            restarts: 20,
            seed: 1,
            max_iterations: 400,
            initial_step: PI / 4.0,
            shrink: 0.5,
            theta_points: 37,
            phi_points: 13,
        }
    }
}

impl OptimizeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(3..=4).contains(&self.copies) {
            return Err(Error::Config(format!(
                "optimizer copies must be 3 or 4, got {}",
                self.copies
            )));
        }
        validate_epsilon(self.epsilon, false)?;
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::Config("initial_step must be positive".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::Config("shrink must lie in (0, 1)".into()));
        }
        validate_points("theta", self.theta_points)?;
        validate_points("phi", self.phi_points)
    }

    fn dim(&self) -> usize {
        1 << (self.copies + 2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub index: usize,
    pub start: Vec<f64>,
    pub angles: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// Objective after each accepted move, starting with the seed value.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub params: XFormParams,
    pub objective: f64,
    pub restarts_used: usize,
    pub best_restart: usize,
    /// Whether the objective grid dropped φ.
    pub phi_independent: bool,
    pub outcomes: Vec<RestartOutcome>,
}

/// Multi-start coordinate pattern search over X-form block angles.
///
/// Restart 0 starts from all zeros, restart 1 from all π/2, restart 2 from
/// the fixed-first-block pattern; later restarts draw angles uniformly in
/// `[−π, π)` from SplitMix64 seeded with `cfg.seed`. Each restart probes
/// every angle at `±step`, moves to the best strict improvement, and
/// otherwise multiplies the step by `shrink`.
pub fn optimize_unitary(cfg: &OptimizeConfig) -> Result<OptimizeResult> {
    cfg.validate()?;
    let dim = cfg.dim();
    let starts = restart_seeds(cfg)?;
    let model = CollisionalModel::new(cfg.epsilon)?;

    let probe = ObjectiveGrid::new(&model, cfg.copies, &theta_grid(4), &phi_grid(5))?;
    let mut phi_independent = true;
    for s in &starts {
        let map = CoarseGrainingMap::from_xform(&XFormParams::new(dim, s.clone())?, "probe")?;
        phi_independent &= probe.phi_spread(&map)? < PHI_PROBE_TOL;
    }
    let phis = if phi_independent {
        vec![0.0]
    } else {
        phi_grid(cfg.phi_points)
    };
    let grid = ObjectiveGrid::new(&model, cfg.copies, &theta_grid(cfg.theta_points), &phis)?;
    // With φ dropped, the gain at θ is ΔDₙ(θ) − min over φ of ΔD(θ, φ).
    let reference = if phi_independent && cfg.objective == Objective::MaxGain {
        let full = ObjectiveGrid::new(
            &model,
            cfg.copies,
            &theta_grid(cfg.theta_points),
            &phi_grid(cfg.phi_points),
        )?;
        full.delta_d
            .chunks(cfg.phi_points)
            .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
            .collect()
    } else {
        grid.delta_d.clone()
    };

    let objective = |angles: &[f64]| -> Result<f64> {
        let map =
            CoarseGrainingMap::from_xform(&XFormParams::new(dim, angles.to_vec())?, "search")?;
        let ddn = grid.delta_d_n(&map)?;
        Ok(match cfg.objective {
            Objective::MaxDeltaN => ddn.into_iter().fold(f64::NEG_INFINITY, f64::max),
            Objective::MaxGain => ddn
                .iter()
                .zip(&reference)
                .map(|(a, b)| a - b)
                .fold(f64::NEG_INFINITY, f64::max),
        })
    };

    let outcomes: Vec<RestartOutcome> = starts
        .into_par_iter()
        .enumerate()
        .map(|(index, start)| pattern_search(cfg, index, start, &objective))
        .collect::<Result<_>>()?;

    let best = outcomes
        .iter()
        .min_by(|a, b| {
            b.objective
                .total_cmp(&a.objective)
                .then(a.index.cmp(&b.index))
        })
        .expect("at least one restart");
    Ok(OptimizeResult {
        params: XFormParams::new(dim, best.angles.clone())?,
        objective: best.objective,
        restarts_used: outcomes.len(),
        best_restart: best.index,
        phi_independent,
        outcomes,
    })
}

fn restart_seeds(cfg: &OptimizeConfig) -> Result<Vec<Vec<f64>>> {
    let dim = cfg.dim();
    let blocks = dim / 2;
    let mut rng = SplitMix64::new(cfg.seed);
    let mut seeds = vec![
        vec![0.0; blocks],
        vec![FRAC_PI_2; blocks],
        XFormParams::paper_pattern(dim)?.angles,
    ];
    while seeds.len() < cfg.restarts {
        seeds.push((0..blocks).map(|_| rng.uniform(-PI, PI)).collect());
    }
    seeds.truncate(cfg.restarts);
    Ok(seeds)
}

fn pattern_search(
    cfg: &OptimizeConfig,
    index: usize,
    start: Vec<f64>,
    objective: &(impl Fn(&[f64]) -> Result<f64> + Sync),
) -> Result<RestartOutcome> {
    let mut x = start.clone();
    let mut f = objective(&x)?;
    let mut history = vec![f];
    let mut step = cfg.initial_step;
    let mut iterations = 0;
    while step >= MIN_STEP && iterations < cfg.max_iterations {
        iterations += 1;
        let mut best: Option<(Vec<f64>, f64)> = None;
        for k in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[k] += sign * step;
                let fy = objective(&y)?;
                if fy > best.as_ref().map_or(f + IMPROVE_EPS, |b| b.1) {
                    best = Some((y, fy));
                }
            }
        }
        match best {
            Some((y, fy)) => {
                x = y;
                f = fy;
                history.push(f);
            }
            None => step *= cfg.shrink,
        }
    }
    Ok(RestartOutcome {
        index,
        start,
        angles: x,
        objective: f,
        iterations,
        history,
    })
}

/// Evolved n-copy differences on a fixed grid, so that each objective call
/// costs one superoperator product per point and snapshot.
struct ObjectiveGrid {
    /// `vec(Λₖ(ρ₂)^⊗n − Λₖ(ρ₁)^⊗n)` for k = 1, 2.
    early: Vec<Vec<num_complex::Complex64>>,
    late: Vec<Vec<num_complex::Complex64>>,
    delta_d: Vec<f64>,
    phi_count: usize,
}

impl ObjectiveGrid {
    fn new(model: &CollisionalModel, copies: usize, thetas: &[f64], phis: &[f64]) -> Result<Self> {
        let (l1, l2) = (model.lambda1(), model.lambda2());
        let mut grid = Self {
            early: Vec::new(),
            late: Vec::new(),
            delta_d: Vec::new(),
            phi_count: phis.len(),
        };
        for &theta in thetas {
            for &phi in phis {
                let pair = bloch_pair(theta, phi);
                let diff = |map: &dyn Superoperator| -> Result<ComplexMatrix> {
                    Ok(&kron_power(&map.apply(&pair.rho2)?, copies)
                        - &kron_power(&map.apply(&pair.rho1)?, copies))
                };
                grid.early.push(diff(&l1)?.vec_columns());
                grid.late.push(diff(&l2)?.vec_columns());
                grid.delta_d.push(delta_d_for(&l1, &l2, &pair)?);
            }
        }
        Ok(grid)
    }

    fn delta_d_n(&self, map: &CoarseGrainingMap) -> Result<Vec<f64>> {
        let s = map.channel().superoperator();
        let norm = |v: &Vec<num_complex::Complex64>| -> Result<f64> {
            trace_norm(&ComplexMatrix::unvec_columns(&s.matvec(v)?, 2, 2)?)
        };
        self.early
            .iter()
            .zip(&self.late)
            .map(|(e, l)| Ok(0.5 * (norm(l)? - norm(e)?)))
            .collect()
    }

    /// Largest change of ΔDₙ along φ at fixed θ.
    fn phi_spread(&self, map: &CoarseGrainingMap) -> Result<f64> {
        let values = self.delta_d_n(map)?;
        Ok(values
            .chunks(self.phi_count)
            .map(|row| {
                let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
                hi - lo
            })
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(seed: u64) -> OptimizeConfig {
        OptimizeConfig {
            restarts: 4,
            seed,
            max_iterations: 40,
            theta_points: 13,
            ..OptimizeConfig::default()
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let a = optimize_unitary(&quick(7)).unwrap();
        let b = optimize_unitary(&quick(7)).unwrap();
        assert_eq!(a.params.angles, b.params.angles);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    }

    #[test]
    fn histories_are_monotone() {
        let r = optimize_unitary(&quick(3)).unwrap();
        for o in &r.outcomes {
            assert!(o.history.windows(2).all(|w| w[1] > w[0]), "{:?}", o.history);
            assert_eq!(*o.history.last().unwrap(), o.objective);
        }
    }

    #[test]
    fn never_below_permutation_seeds() {
        let r = optimize_unitary(&quick(11)).unwrap();
        for o in &r.outcomes[..3] {
            assert!(r.objective >= o.history[0]);
        }
        assert!(r.phi_independent);
    }

    #[test]
    fn config_validation() {
        let bad = |f: fn(&mut OptimizeConfig)| {
            let mut c = OptimizeConfig::default();
            f(&mut c);
            matches!(optimize_unitary(&c), Err(Error::Config(_)))
        };
        assert!(bad(|c| c.copies = 2));
        assert!(bad(|c| c.restarts = 0));
        assert!(bad(|c| c.shrink = 1.0));
        assert!(bad(|c| c.initial_step = 0.0));
        assert!(bad(|c| c.epsilon = 0.6));
    }

    #[test]
    fn seeds_layout() {
        let c = OptimizeConfig {
            restarts: 5,
            ..OptimizeConfig::default()
        };
        let s = restart_seeds(&c).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s[0].iter().all(|&a| a == 0.0));
        assert!(s[1].iter().all(|&a| a == FRAC_PI_2));
        assert_eq!(s[2][0], 0.0);
        assert!(s[3..].iter().flatten().all(|a| (-PI..PI).contains(a)));
        let one = OptimizeConfig {
            restarts: 1,
            ..OptimizeConfig::default()
        };
        assert_eq!(restart_seeds(&one).unwrap().len(), 1);
    }
}
