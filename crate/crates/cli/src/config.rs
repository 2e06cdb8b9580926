//! Flat option sets shared by JSON config files and command-line flags.
//! A file supplies values first; any flag given on the command line wins.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use nmdistill::coarse::XFormParams;
use nmdistill::experiments::{
    AppendixBCase, EigScanConfig, Objective, OptimizeConfig, SweepConfig, UnitarySource,
    DEFAULT_PHI_POINTS, DEFAULT_THETA_POINTS,
};
use nmdistill::io::{parse_angles_json, OptimizeDocument};
use nmdistill::witness::ZetaMode;
use nmdistill::{Error, Result};

pub trait Overlay: Sized + for<'de> Deserialize<'de> {
    /// Fields set in `over` replace those in `self`.
    fn overlay(self, over: Self) -> Self;

    fn resolve(flags: Self, file: Option<&Path>) -> Result<Self> {
        match file {
            None => Ok(flags),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                let from_file: Self = serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Ok(from_file.overlay(flags))
            }
        }
    }
}

macro_rules! overlay_fields {
    ($ty:ty { $($field:ident),* $(,)? }) => {
        impl Overlay for $ty {
            fn overlay(self, over: Self) -> Self {
                Self { $($field: over.$field.or(self.$field)),* }
            }
        }
    };
}

fn unitary_source(
    name: Option<&str>,
    angles_file: Option<&Path>,
    default: UnitarySource,
) -> Result<UnitarySource> {
    match (name, angles_file) {
        (None, None) => Ok(default),
        (None | Some("angles"), Some(path)) => Ok(UnitarySource::Angles(read_angles(path)?)),
        (Some("angles"), None) => Err(Error::Config("unitary 'angles' needs angles_file".into())),
        (Some(_), Some(_)) => Err(Error::Config(
            "angles_file is only valid with unitary 'angles'".into(),
        )),
        (Some("paper16"), None) => Ok(UnitarySource::Paper16),
        (Some("pattern"), None) => Ok(UnitarySource::Pattern),
        (Some("identity"), None) => Ok(UnitarySource::Identity),
        (Some(other), None) => Err(Error::Config(format!(
            "unknown unitary '{other}' (expected paper16, pattern, identity or angles)"
        ))),
    }
}

/// Reads `{dim, angles}` or an optimize.json document.
fn read_angles(path: &Path) -> Result<XFormParams> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    match parse_angles_json(&text) {
        Ok(p) => Ok(p),
        Err(first) => serde_json::from_str::<OptimizeDocument>(&text)
            .map_err(|_| Error::Config(format!("{}: {first}", path.display())))?
            .params(),
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepOptions {
    /// Comma-separated ε values [default: 0.4]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub epsilons: Option<Vec<f64>>,
    /// Number of copies n [default: 2]
    #[arg(long)]
    pub copies: Option<usize>,
    /// paper16 | pattern | identity | angles [default: paper16]
    #[arg(long)]
    pub unitary: Option<String>,
    /// JSON file with {dim, angles} (or an optimize.json) for unitary 'angles'
    #[arg(long = "angles_file", alias = "angles-file")]
    pub angles_file: Option<PathBuf>,
    /// θ grid points over [0, π] [default: 181]
    #[arg(long = "theta_points", alias = "theta-points")]
    pub theta_points: Option<usize>,
    /// φ grid points over [0, 2π] [default: 361]
    #[arg(long = "phi_points", alias = "phi-points")]
    pub phi_points: Option<usize>,
}

overlay_fields!(SweepOptions {
    epsilons,
    copies,
    unitary,
    angles_file,
    theta_points,
    phi_points
});

impl SweepOptions {
    pub fn build(&self) -> Result<SweepConfig> {
        let d = SweepConfig::default();
        let cfg = SweepConfig {
            epsilons: self.epsilons.clone().unwrap_or(d.epsilons),
            copies: self.copies.unwrap_or(d.copies),
            unitary: unitary_source(
                self.unitary.as_deref(),
                self.angles_file.as_deref(),
                d.unitary,
            )?,
            theta_points: self.theta_points.unwrap_or(DEFAULT_THETA_POINTS),
            phi_points: self.phi_points.unwrap_or(DEFAULT_PHI_POINTS),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaxDiffOptions {
    /// ε value [default: 0.4]
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Number of copies n [default: 2]
    #[arg(long)]
    pub copies: Option<usize>,
    /// paper16 | pattern | identity | angles [default: paper16]
    #[arg(long)]
    pub unitary: Option<String>,
    /// JSON file with {dim, angles} (or an optimize.json) for unitary 'angles'
    #[arg(long = "angles_file", alias = "angles-file")]
    pub angles_file: Option<PathBuf>,
    /// θ grid points over [0, π] [default: 181]
    #[arg(long = "theta_points", alias = "theta-points")]
    pub theta_points: Option<usize>,
    /// φ grid points over [0, 2π] [default: 361]
    #[arg(long = "phi_points", alias = "phi-points")]
    pub phi_points: Option<usize>,
}

overlay_fields!(MaxDiffOptions {
    epsilon,
    copies,
    unitary,
    angles_file,
    theta_points,
    phi_points
});

impl MaxDiffOptions {
    pub fn build(&self) -> Result<SweepConfig> {
        SweepOptions {
            epsilons: Some(vec![self.epsilon.unwrap_or(0.4)]),
            copies: self.copies,
            unitary: self.unitary.clone(),
            angles_file: self.angles_file.clone(),
            theta_points: self.theta_points,
            phi_points: self.phi_points,
        }
        .build()
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigScanOptions {
    /// Comma-separated ε values in [0, 0.5) [default: 0.01..0.49 step 0.01]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub epsilons: Option<Vec<f64>>,
    /// Comma-separated modes: single, tensor, distilled [default: all]
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<String>>,
    /// Comma-separated copy counts for tensor/distilled [default: 2,3,4]
    #[arg(long, value_delimiter = ',')]
    pub copies: Option<Vec<usize>>,
    /// paper16 | pattern | identity | angles [default: pattern]
    #[arg(long)]
    pub unitary: Option<String>,
    /// JSON file with {dim, angles} (or an optimize.json) for unitary 'angles'
    #[arg(long = "angles_file", alias = "angles-file")]
    pub angles_file: Option<PathBuf>,
}

overlay_fields!(EigScanOptions {
    epsilons,
    modes,
    copies,
    unitary,
    angles_file
});

impl EigScanOptions {
    pub fn build(&self) -> Result<EigScanConfig> {
        let d = EigScanConfig::default();
        let modes = match &self.modes {
            Some(m) => m
                .iter()
                .map(|s| ZetaMode::parse(s))
                .collect::<Result<_>>()?,
            None => d.modes,
        };
        let cfg = EigScanConfig {
            epsilons: self.epsilons.clone().unwrap_or(d.epsilons),
            modes,
            copies: self.copies.clone().unwrap_or(d.copies),
            unitary: unitary_source(
                self.unitary.as_deref(),
                self.angles_file.as_deref(),
                d.unitary,
            )?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AppendixBOptions {
    /// counterexample | antipodal [default: antipodal unless r1/r2 are given]
    #[arg(long)]
    pub preset: Option<String>,
    /// θ points for the antipodal preset [default: 19]
    #[arg(long)]
    pub points: Option<usize>,
    /// Signed Bloch radius of the first state (custom case)
    #[arg(long, allow_negative_numbers = true)]
    pub r1: Option<f64>,
    /// Signed Bloch radius of the second state (custom case)
    #[arg(long, allow_negative_numbers = true)]
    pub r2: Option<f64>,
    /// Polar angle of the custom case [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Azimuth of the custom case [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
}

overlay_fields!(AppendixBOptions {
    preset,
    points,
    r1,
    r2,
    theta,
    phi
});

impl AppendixBOptions {
    pub fn build(&self) -> Result<Vec<AppendixBCase>> {
        let custom = self.r1.is_some() || self.r2.is_some();
        match (self.preset.as_deref(), custom) {
            (Some(_), true) => Err(Error::Config(
                "give either a preset or r1/r2, not both".into(),
            )),
            (None, true) => Ok(vec![AppendixBCase {
                r1: self
                    .r1
                    .ok_or_else(|| Error::Config("custom case needs r1".into()))?,
                r2: self
                    .r2
                    .ok_or_else(|| Error::Config("custom case needs r2".into()))?,
                theta: self.theta.unwrap_or(0.0),
                phi: self.phi.unwrap_or(0.0),
            }]),
            (Some("counterexample"), false) => Ok(AppendixBCase::counterexample()),
            (Some("antipodal") | None, false) => {
                let points = self.points.unwrap_or(19);
                if points == 0 {
                    return Err(Error::Config("points must be positive".into()));
                }
                Ok(AppendixBCase::antipodal(points))
            }
            (Some(other), false) => Err(Error::Config(format!(
                "unknown preset '{other}' (expected counterexample or antipodal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizeOptions {
    /// Number of copies, 3 or 4 [default: 3]
    #[arg(long)]
    pub copies: Option<usize>,
    /// ε value [default: 0.4]
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// max_delta_n | max_gain [default: max_delta_n]
    #[arg(long)]
    pub objective: Option<String>,
    /// Number of restarts [default: 20]
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Seed for random restarts [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Iteration cap per restart [default: 400]
    #[arg(long = "max_iterations", alias = "max-iterations")]
    pub max_iterations: Option<usize>,
    /// Initial probe step in radians [default: π/4]
    #[arg(long = "initial_step", alias = "initial-step")]
    pub initial_step: Option<f64>,
    /// Step shrink factor in (0, 1) [default: 0.5]
    #[arg(long)]
    pub shrink: Option<f64>,
    /// Coarse θ grid for the objective [default: 37]
    #[arg(long = "theta_points", alias = "theta-points")]
    pub theta_points: Option<usize>,
    /// Coarse φ grid, used only if ΔDₙ depends on φ [default: 13]
    #[arg(long = "phi_points", alias = "phi-points")]
    pub phi_points: Option<usize>,
}

overlay_fields!(OptimizeOptions {
    copies,
    epsilon,
    objective,
    restarts,
    seed,
    max_iterations,
    initial_step,
    shrink,
    theta_points,
    phi_points,
});

impl OptimizeOptions {
    pub fn build(&self) -> Result<OptimizeConfig> {
        let d = OptimizeConfig::default();
        let objective = match &self.objective {
            Some(s) => Objective::parse(s).map_err(|e| Error::Config(e.to_string()))?,
            None => d.objective,
        };
        let cfg = OptimizeConfig {
            copies: self.copies.unwrap_or(d.copies),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            objective,
            restarts: self.restarts.unwrap_or(d.restarts),
            seed: self.seed.unwrap_or(d.seed),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            initial_step: self.initial_step.unwrap_or(d.initial_step),
            shrink: self.shrink.unwrap_or(d.shrink),
            theta_points: self.theta_points.unwrap_or(d.theta_points),
            phi_points: self.phi_points.unwrap_or(d.phi_points),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyOptions {}

impl Overlay for VerifyOptions {
    fn overlay(self, _over: Self) -> Self {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file: SweepOptions =
            serde_json::from_str(r#"{"epsilons": [0.1], "copies": 2, "phi_points": 5}"#).unwrap();
        let flags = SweepOptions {
            phi_points: Some(9),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.epsilons, Some(vec![0.1]));
        assert_eq!(merged.phi_points, Some(9));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<OptimizeOptions>(r#"{"restart": 3}"#).is_err());
        assert!(serde_json::from_str::<VerifyOptions>(r#"{"x": 1}"#).is_err());
    }

    #[test]
    fn unitary_names() {
        let p = UnitarySource::Paper16;
        assert_eq!(unitary_source(None, None, p.clone()).unwrap(), p);
        assert_eq!(
            unitary_source(Some("pattern"), None, p.clone()).unwrap(),
            UnitarySource::Pattern
        );
        assert!(unitary_source(Some("angles"), None, p.clone()).is_err());
        assert!(unitary_source(Some("nope"), None, p).is_err());
    }

    #[test]
    fn appendixb_presets() {
        let o = AppendixBOptions {
            preset: Some("counterexample".into()),
            ..Default::default()
        };
        assert_eq!(o.build().unwrap().len(), 1);
        assert_eq!(AppendixBOptions::default().build().unwrap().len(), 19);
        let both = AppendixBOptions {
            preset: Some("antipodal".into()),
            r1: Some(1.0),
            ..Default::default()
        };
        assert!(both.build().is_err());
    }
}
