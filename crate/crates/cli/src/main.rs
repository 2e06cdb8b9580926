//! `nmdistill` command-line front end.

mod config;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{
    AppendixBOptions, EigScanOptions, MaxDiffOptions, OptimizeOptions, Overlay, SweepOptions,
    VerifyOptions,
};
use nmdistill::experiments::{appendix_b, eig_scan, grid_sweep, max_diff, optimize_unitary};
use nmdistill::io::{self, OptimizeDocument, UnitaryDocument};
use nmdistill::{checks, coarse, Error};

const THREADS_ENV: &str = "NMDISTILL_THREADS";

#[derive(Parser)]
#[command(
    name = "nmdistill",
    version,
    about = "Distillation of non-Markovianity: sweeps, scans and optimizer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON file with the subcommand's keys; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files
    #[arg(
        long = "out_dir",
        alias = "out-dir",
        default_value = ".",
        global = true
    )]
    out_dir: PathBuf,
    /// More progress output on stderr
    #[arg(short, long, global = true, conflicts_with = "quiet")]
    verbose: bool,
    /// No stdout summary
    #[arg(short, long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suite; exits 1 if any check fails
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: VerifyOptions,
    },
    /// ΔD and ΔDₙ on a (ε, θ, φ) grid -> sweep.csv
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: SweepOptions,
    },
    /// Refined maximum of ΔDₙ − ΔD at one ε -> maxdiff.json
    Maxdiff {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: MaxDiffOptions,
    },
    /// ζ for single, tensor and distilled intermediate maps -> eigscan.csv
    Eigscan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: EigScanOptions,
    },
    /// Coarse-graining with no dynamics -> appendixb.csv
    Appendixb {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: AppendixBOptions,
    },
    /// Pattern search over X-form dilations -> optimize.json, unitary.json
    Optimize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: OptimizeOptions,
    },
}

enum Failure {
    Config(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

fn config_error(e: Error) -> Failure {
    Failure::Config(e.to_string())
}

#[derive(Serialize)]
struct Manifest<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'static str,
    config_file: Option<&'a Path>,
    inputs: &'a T,
    outputs: Vec<String>,
    threads: usize,
    wall_time_seconds: f64,
}

struct Run {
    common: Common,
    name: &'static str,
    started: Instant,
    outputs: Vec<String>,
}

impl Run {
    fn create(&mut self, file: &str) -> Result<BufWriter<File>, Failure> {
        std::fs::create_dir_all(&self.common.out_dir).map_err(|e| {
            Failure::Run(format!(
                "cannot create {}: {e}",
                self.common.out_dir.display()
            ))
        })?;
        let path = self.common.out_dir.join(file);
        let f = File::create(&path)
            .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(file.to_string());
        Ok(BufWriter::new(f))
    }

    fn write_text(&mut self, file: &str, text: &str) -> Result<(), Failure> {
        use std::io::Write;
        let mut w = self.create(file)?;
        w.write_all(text.as_bytes())
            .and_then(|_| w.flush())
            .map_err(|e| Failure::Run(format!("cannot write {file}: {e}")))
    }

    fn log(&self, msg: impl AsRef<str>) {
        if self.common.verbose {
            eprintln!("[{}] {}", self.name, msg.as_ref());
        }
    }

    fn say(&self, msg: impl AsRef<str>) {
        if !self.common.quiet {
            println!("{}", msg.as_ref());
        }
    }

    fn finish<T: Serialize>(mut self, inputs: &T) -> Result<(), Failure> {
        let manifest = Manifest {
            tool: "nmdistill",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: self.name,
            config_file: self.common.config.as_deref(),
            inputs,
            outputs: self.outputs.clone(),
            threads: rayon::current_num_threads(),
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        let text = io::to_json_pretty(&manifest)?;
        let file = format!("{}.manifest.json", self.name);
        self.write_text(&file, &text)?;
        self.log(format!("wrote {}", self.outputs.join(", ")));
        Ok(())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        Failure::Config(format!(
            "{THREADS_ENV} must be a non-negative integer, got '{raw}'"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Run(e.to_string()))?;
    }
    Ok(())
}

fn execute(command: Command) -> Result<bool, Failure> {
    let start = |common: Common, name| Run {
        common,
        name,
        started: Instant::now(),
        outputs: Vec::new(),
    };
    match command {
        Command::Verify { common, opts } => {
            let _ = VerifyOptions::resolve(opts, common.config.as_deref()).map_err(config_error)?;
            let mut run = start(common, "verify");
            let outcomes = checks::run_all();
            let mut passed = true;
            for (o, err) in &outcomes {
                passed &= o.passed;
                let status = if o.passed { "PASS" } else { "FAIL" };
                let extra = err.as_ref().map(|e| format!(" ({e})")).unwrap_or_default();
                run.say(format!(
                    "{status} {}: worst {:.3e} (tol {:.0e}){extra}",
                    o.name, o.worst, o.tolerance
                ));
            }
            let report: Vec<_> = outcomes.iter().map(|(o, _)| o).collect();
            run.write_text("verify.json", &io::to_json_pretty(&report)?)?;
            run.finish(&serde_json::json!({}))?;
            Ok(passed)
        }
        Command::Sweep { common, opts } => {
            let opts =
                SweepOptions::resolve(opts, common.config.as_deref()).map_err(config_error)?;
            let cfg = opts.build().map_err(config_error)?;
            let mut run = start(common, "sweep");
            let rows = grid_sweep(&cfg)?;
            io::write_sweep_csv(run.create("sweep.csv")?, &rows)?;
            run.say(format!("{} rows -> sweep.csv", rows.len()));
            run.finish(&cfg)?;
            Ok(true)
        }
        Command::Maxdiff { common, opts } => {
            let opts =
                MaxDiffOptions::resolve(opts, common.config.as_deref()).map_err(config_error)?;
            let cfg = opts.build().map_err(config_error)?;
            let mut run = start(common, "maxdiff");
            let report = max_diff(&cfg)?;
            run.say(format!(
                "max ΔD{} − ΔD = {:.7} at ε = {}",
                report.copies, report.best, report.epsilon
            ));
            for a in &report.argmax {
                run.say(format!(
                    "  θ = {:.5}π  φ = {:.5}π  value {:.9}",
                    a.theta / std::f64::consts::PI,
                    a.phi / std::f64::consts::PI,
                    a.value
                ));
            }
            run.write_text("maxdiff.json", &io::to_json_pretty(&report)?)?;
            run.finish(&cfg)?;
            Ok(true)
        }
        Command::Eigscan { common, opts } => {
            let opts =
                EigScanOptions::resolve(opts, common.config.as_deref()).map_err(config_error)?;
            let cfg = opts.build().map_err(config_error)?;
            let mut run = start(common, "eigscan");
            let rows = eig_scan(&cfg)?;
            io::write_eigscan_csv(run.create("eigscan.csv")?, &rows)?;
            run.say(format!("{} rows -> eigscan.csv", rows.len()));
            run.finish(&cfg)?;
            Ok(true)
        }
        Command::Appendixb { common, opts } => {
            let opts =
                AppendixBOptions::resolve(opts, common.config.as_deref()).map_err(config_error)?;
            let cases = opts.build().map_err(config_error)?;
            let mut run = start(common, "appendixb");
            let rows = appendix_b(&cases).map_err(config_error)?;
            io::write_appendixb_csv(run.create("appendixb.csv")?, &rows)?;
            for r in &rows {
                run.say(format!(
                    "r1 {} r2 {} θ {} φ {}: d_before {} d_after {}",
                    io::format_sig(r.r1),
                    io::format_sig(r.r2),
                    io::format_sig(r.theta),
                    io::format_sig(r.phi),
                    io::format_sig(r.d_before),
                    io::format_sig(r.d_after)
                ));
            }
            run.finish(&cases)?;
            Ok(true)
        }
        Command::Optimize { common, opts } => {
            let opts =
                OptimizeOptions::resolve(opts, common.config.as_deref()).map_err(config_error)?;
            let cfg = opts.build().map_err(config_error)?;
            let mut run = start(common, "optimize");
            let result = optimize_unitary(&cfg)?;
            for o in &result.outcomes {
                run.log(format!(
                    "restart {:>3}: {:.9} after {} iterations",
                    o.index, o.objective, o.iterations
                ));
            }
            let doc = OptimizeDocument::new(&cfg, &result);
            run.write_text("optimize.json", &io::to_json_pretty(&doc)?)?;
            let u = UnitaryDocument::from_matrix(&coarse::xform_from_angles(&result.params));
            run.write_text("unitary.json", &io::to_json_pretty(&u)?)?;
            run.say(format!(
                "objective {:.9} (restart {} of {})",
                result.objective, result.best_restart, result.restarts_used
            ));
            run.finish(&cfg)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|_| execute(cli.command));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
