use serde::{Deserialize, Serialize};

use crate::channels::Superoperator;
use crate::coarse::CoarseGrainingMap;
use crate::error::{Error, Result};
use crate::matcore::kron;
use crate::matcore::pauli::bloch_state_polar;
use crate::witness::distinguishability;

/// Two qubit states sharing a Bloch axis `(θ, φ)` with signed radii; the
/// antipodal pure pair is `r1 = 1, r2 = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixBCase {
    pub r1: f64,
    pub r2: f64,
    pub theta: f64,
    pub phi: f64,
}

impl AppendixBCase {
    /// The two-copy pair whose distinguishability grows under λ alone.
    pub fn counterexample() -> Vec<Self> {
        vec![Self {
            r1: 1.0,
            r2: 0.5,
            theta: 0.0,
            phi: 0.0,
        }]
    }

    /// Antipodal pure pairs on `points` equally spaced θ in `[0, π]`.
    pub fn antipodal(points: usize) -> Vec<Self> {
        super::theta_grid(points)
            .into_iter()
            .map(|theta| Self {
                r1: 1.0,
                r2: -1.0,
                theta,
                phi: 0.0,
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        for r in [self.r1, self.r2] {
            if !(r.is_finite() && r.abs() <= 1.0) {
                return Err(Error::Config(format!("Bloch radius {r} outside [-1, 1]")));
            }
        }
        if !(self.theta.is_finite() && self.phi.is_finite()) {
            return Err(Error::Config("angles must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixBRow {
    pub r1: f64,
    pub r2: f64,
    pub theta: f64,
    pub phi: f64,
    pub d_before: f64,
    pub d_after: f64,
}

/// `D(ρ₁, ρ₂)` against `D(λ(ρ₁⊗ρ₁), λ(ρ₂⊗ρ₂))` for the two-copy
/// permutation decoder with no dynamics.
pub fn appendix_b(cases: &[AppendixBCase]) -> Result<Vec<AppendixBRow>> {
    let lambda = CoarseGrainingMap::paper16();
    cases
        .iter()
        .map(|c| {
            c.validate()?;
            let rho1 = bloch_state_polar(c.r1, c.theta, c.phi);
            let rho2 = bloch_state_polar(c.r2, c.theta, c.phi);
            let out1 = lambda.channel().apply(&kron(&rho1, &rho1))?;
            let out2 = lambda.channel().apply(&kron(&rho2, &rho2))?;
            Ok(AppendixBRow {
                r1: c.r1,
                r2: c.r2,
                theta: c.theta,
                phi: c.phi,
                d_before: distinguishability(&rho1, &rho2)?,
                d_after: distinguishability(&out1, &out2)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn counterexample_values() {
        let row = appendix_b(&AppendixBCase::counterexample()).unwrap()[0];
        assert!((row.d_before - 0.25).abs() < 1e-15);
        assert!((row.d_after - 0.4375).abs() < 1e-12);
    }

    #[test]
    fn equator_pair_collapses() {
        let c = AppendixBCase {
            r1: 1.0,
            r2: -1.0,
            theta: FRAC_PI_2,
            phi: 0.3,
        };
        let row = appendix_b(&[c]).unwrap()[0];
        assert!(row.d_after.abs() < 1e-12);
        assert!((row.d_before - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_radius() {
        let c = AppendixBCase {
            r1: 1.2,
            r2: 0.0,
            theta: 0.0,
            phi: 0.0,
        };
        assert!(appendix_b(&[c]).is_err());
    }
}
