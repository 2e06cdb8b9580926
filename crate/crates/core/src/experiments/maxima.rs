use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{phi_grid, theta_grid, BackflowEvaluator, SweepConfig};
use crate::collisional::CollisionalModel;
use crate::error::{Error, Result};

/// Golden-section stopping width.
pub const REFINE_TOL: f64 = 1e-5;
/// Grid local maxima further than this below the grid maximum are not refined.
const CANDIDATE_WINDOW: f64 = 1e-3;
const MAX_CANDIDATES: usize = 64;
/// Refined points within this of the best value count as argmax points.
const ARGMAX_SLACK: f64 = 1e-7;
/// Refined points closer than this (in θ and wrapped φ) are the same point.
const DEDUP_RADIUS: f64 = 1e-3 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgMax {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximaReport {
    pub epsilon: f64,
    pub copies: usize,
    pub unitary: String,
    /// Largest refined value of `ΔDₙ − ΔD`.
    pub best: f64,
    /// Largest raw grid value.
    pub grid_best: f64,
    /// Distinct maximizers, sorted by `(θ, φ)`, φ in `[0, 2π)`.
    pub argmax: Vec<ArgMax>,
    pub theta_points: usize,
    pub phi_points: usize,
}

/// Maximum of `ΔDₙ − ΔD` over `(θ, φ)` at a single ε.
///
/// Every grid local maximum close to the grid maximum is polished by
/// alternating golden-section searches in θ and φ inside one grid step.
pub fn max_diff(cfg: &SweepConfig) -> Result<MaximaReport> {
    cfg.validate()?;
    let [epsilon] = cfg.epsilons[..] else {
        return Err(Error::Config(format!(
            "maxdiff takes exactly one epsilon, got {}",
            cfg.epsilons.len()
        )));
    };
    let decoder = cfg.unitary.decoder(cfg.copies)?;
    let label = decoder.label().to_string();
    let eval = BackflowEvaluator::new(CollisionalModel::new(epsilon)?, decoder);
    let thetas = theta_grid(cfg.theta_points);
    let phis = phi_grid(cfg.phi_points);
    let (nt, np) = (thetas.len(), phis.len());

    let values: Vec<f64> = (0..nt * np)
        .into_par_iter()
        .map(|k| eval.gain(thetas[k / np], phis[k % np]))
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize| values[i * np + j];
    let grid_best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let grid_worst = values.iter().copied().fold(f64::INFINITY, f64::min);

    let report = |best: f64, argmax: Vec<ArgMax>| MaximaReport {
        epsilon,
        copies: cfg.copies,
        unitary: label.clone(),
        best,
        grid_best,
        argmax,
        theta_points: nt,
        phi_points: np,
    };

    if grid_best - grid_worst <= 1e-12 {
        let k = values.iter().position(|&v| v == grid_best).unwrap_or(0);
        let point = ArgMax {
            theta: thetas[k / np],
            phi: phis[k % np],
            value: grid_best,
        };
        return Ok(report(grid_best, vec![point]));
    }

    // The last φ column repeats φ = 0 when the grid closes the circle.
    let periodic = np > 2 && (phis[np - 1] - phis[0] - TAU).abs() < 1e-12;
    let cols = if periodic { np - 1 } else { np };
    let phi_neighbors = |j: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(2);
        if j > 0 {
            out.push(j - 1);
        } else if periodic {
            out.push(cols - 1);
        }
        if j + 1 < cols {
            out.push(j + 1);
        } else if periodic {
            out.push(0);
        }
        out
    };

    let mut candidates = Vec::new();
    for i in 0..nt {
        for j in 0..cols {
            let v = at(i, j);
            if v < grid_best - CANDIDATE_WINDOW {
                continue;
            }
            let mut neighbors: Vec<f64> =
                phi_neighbors(j).into_iter().map(|jj| at(i, jj)).collect();
            if i > 0 {
                neighbors.push(at(i - 1, j));
            }
            if i + 1 < nt {
                neighbors.push(at(i + 1, j));
            }
            if neighbors.iter().all(|&w| v >= w) {
                candidates.push((i, j, v));
            }
        }
    }
    candidates.sort_by(|a, b| b.2.total_cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    candidates.truncate(MAX_CANDIDATES);

    let h_theta = if nt > 1 { thetas[1] - thetas[0] } else { 0.0 };
    let h_phi = if np > 1 { phis[1] - phis[0] } else { 0.0 };
    let refined: Vec<ArgMax> = candidates
        .par_iter()
        .map(|&(i, j, v)| refine(&eval, thetas[i], phis[j], v, h_theta, h_phi))
        .collect::<Result<_>>()?;

    let best = refined.iter().map(|p| p.value).fold(grid_best, f64::max);
    let mut argmax: Vec<ArgMax> = Vec::new();
    for p in refined
        .into_iter()
        .filter(|p| p.value >= best - ARGMAX_SLACK)
    {
        let p = ArgMax {
            phi: p.phi.rem_euclid(TAU),
            ..p
        };
        match argmax.iter_mut().find(|q| same_point(q, &p)) {
            Some(q) if p.value > q.value => *q = p,
            Some(_) => {}
            None => argmax.push(p),
        }
    }
    argmax.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.phi.total_cmp(&b.phi)));
    Ok(report(best, argmax))
}

fn same_point(a: &ArgMax, b: &ArgMax) -> bool {
    let dphi = (a.phi - b.phi).rem_euclid(TAU);
    (a.theta - b.theta).abs() < DEDUP_RADIUS && dphi.min(TAU - dphi) < DEDUP_RADIUS
}

fn refine(
    eval: &BackflowEvaluator,
    theta0: f64,
    phi0: f64,
    v0: f64,
    h_theta: f64,
    h_phi: f64,
) -> Result<ArgMax> {
    let (mut theta, mut phi, mut value) = (theta0, phi0, v0);
    for _ in 0..50 {
        let (mut moved_theta, mut moved_phi) = (0.0, 0.0);
        if h_theta > 0.0 {
            let lo = (theta0 - h_theta).max(0.0);
            let hi = (theta0 + h_theta).min(PI);
            let (t, v) = golden_max(|t| eval.gain(t, phi), lo, hi, REFINE_TOL)?;
            if v > value {
                moved_theta = (t - theta).abs();
                theta = t;
                value = v;
            }
        }
        if h_phi > 0.0 {
            let (p, v) = golden_max(
                |p| eval.gain(theta, p),
                phi0 - h_phi,
                phi0 + h_phi,
                REFINE_TOL,
            )?;
            if v > value {
                moved_phi = (p - phi).abs();
                phi = p;
                value = v;
            }
        }
        if moved_theta < REFINE_TOL && moved_phi < REFINE_TOL {
            break;
        }
    }
    Ok(ArgMax { theta, phi, value })
}

/// Golden-section maximization on `[lo, hi]` down to width `tol`.
fn golden_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::UnitarySource;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| Ok(1.0 - (x - 0.3).powi(2)), 0.0, 1.0, 1e-9).unwrap();
        assert!((x - 0.3).abs() < 1e-8 && (v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flat_landscape_at_zero_epsilon() {
        let cfg = SweepConfig {
            epsilons: vec![0.0],
            theta_points: 11,
            phi_points: 13,
            ..SweepConfig::default()
        };
        let r = max_diff(&cfg).unwrap();
        assert_eq!(r.best, 0.0);
        assert_eq!(r.argmax.len(), 1);
    }

    #[test]
    fn coarse_grid_still_finds_four_points() {
        let cfg = SweepConfig {
            epsilons: vec![0.4],
            unitary: UnitarySource::Paper16,
            theta_points: 37,
            phi_points: 73,
            copies: 2,
        };
        let r = max_diff(&cfg).unwrap();
        assert!((r.best - 0.3216355).abs() < 1e-5, "{}", r.best);
        assert_eq!(r.argmax.len(), 4, "{:?}", r.argmax);
        assert!(r.best >= r.grid_best);
    }

    #[test]
    fn rejects_multiple_epsilons() {
        let cfg = SweepConfig {
            epsilons: vec![0.1, 0.2],
            ..SweepConfig::default()
        };
        assert!(matches!(max_diff(&cfg), Err(Error::Config(_))));
    }
}
