//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nmdistill::channels::{compose, is_cptp, tensor, tensor_power, QuantumChannel, Superoperator};
use nmdistill::checks::{random_hermitian, random_kraus_channel, xform_entries};
use nmdistill::coarse::{paper_u16, CoarseGrainingMap};
use nmdistill::collisional::CollisionalModel;
use nmdistill::experiments::rng::SplitMix64;
use nmdistill::experiments::{
    appendix_b, eig_scan, grid_sweep, max_diff, optimize_unitary, AppendixBCase, BackflowEvaluator,
    EigScanConfig, OptimizeConfig, SweepConfig, UnitarySource,
};
use nmdistill::matcore::pauli::bloch_state_polar;
use nmdistill::matcore::{kron, trace_norm, ComplexMatrix};
use nmdistill::witness::{
    analytic_delta_d, analytic_delta_d2, bloch_pair, delta_d, delta_d_n, ZetaMode,
};
use nmdistill::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = fn() -> Result<Outcome>;

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

/// Global maximum of ΔD₂ − ΔD at ε = 0.4: 0.322 ± 0.001 at four points.
fn global_maximum() -> Result<Outcome> {
    let start = Instant::now();
    let report = max_diff(&SweepConfig::default())?;
    let elapsed = start.elapsed().as_secs_f64();
    let expected = [(0.386, 0.5), (0.386, 1.5), (0.614, 0.5), (0.614, 1.5)];
    let matched = expected.iter().all(|&(t, p)| {
        report
            .argmax
            .iter()
            .any(|a| (a.theta - t * PI).abs() <= 0.002 * PI && (a.phi - p * PI).abs() <= 0.002 * PI)
    });
    let points: Vec<String> = report
        .argmax
        .iter()
        .map(|a| format!("({:.5}π, {:.5}π)", a.theta / PI, a.phi / PI))
        .collect();
    outcome(
        (report.best - 0.322).abs() <= 0.001
            && report.argmax.len() == 4
            && matched
            && elapsed < 60.0,
        format!(
            "max {:.7} at {} in {elapsed:.1}s",
            report.best,
            points.join(" ")
        ),
    )
}

/// ε = 0.4 has points with ΔD₂ > ΔD > 0; ε = 0.2 has ΔD₂ ≥ ΔD and both ≤ 0.
fn regime_signatures() -> Result<Outcome> {
    const SLACK: f64 = 1e-10;
    let rows = grid_sweep(&SweepConfig {
        epsilons: vec![0.4, 0.2],
        ..SweepConfig::default()
    })?;
    let strong = rows
        .iter()
        .filter(|r| r.epsilon == 0.4 && r.delta_d_n > r.delta_d + SLACK && r.delta_d > SLACK)
        .count();
    let weak_violations = rows
        .iter()
        .filter(|r| r.epsilon == 0.2)
        .filter(|r| r.delta_d_n < r.delta_d - SLACK || r.delta_d > SLACK || r.delta_d_n > SLACK)
        .count();
    outcome(
        strong > 0 && weak_violations == 0,
        format!("ε=0.4: {strong} points with ΔD₂ > ΔD > 0; ε=0.2: {weak_violations} violations"),
    )
}

/// λ alone: antipodal pairs end at |cos θ|, the mixed pair goes 0.25 → 0.4375.
fn coarse_graining_only() -> Result<Outcome> {
    let worst = appendix_b(&AppendixBCase::antipodal(19))?
        .iter()
        .map(|r| (r.d_after - r.theta.cos().abs()).abs())
        .fold(0.0, f64::max);
    let c = appendix_b(&AppendixBCase::counterexample())?[0];
    outcome(
        worst <= 1e-12 && c.d_before == 0.25 && (c.d_after - 0.4375).abs() <= 1e-12,
        format!(
            "antipodal worst |D − |cos θ|| = {worst:.2e}; counterexample {} → {:.12}",
            c.d_before, c.d_after
        ),
    )
}

/// Strong grid: ζ_single < 0 and |ζ_single| < |ζ_distilled(2)| ≤ |ζ_tensor(2)|.
/// Weak grid: ζ_distilled(n) ≥ −1e−10 and ζ_tensor(n) < −1e−6 for n = 2, 3, 4.
fn zeta_orderings() -> Result<Outcome> {
    let rows_strong = eig_scan(&EigScanConfig {
        epsilons: EigScanConfig::strong_grid(),
        copies: vec![2],
        unitary: UnitarySource::Paper16,
        ..EigScanConfig::default()
    })?;
    let find = |rows: &[nmdistill::experiments::EigScanRow], e: f64, n: usize, mode| {
        rows.iter()
            .find(|r| {
                r.epsilon == e && r.mode == mode && (mode == ZetaMode::Single || r.copies == n)
            })
            .map(|r| r.zeta)
            .expect("row present")
    };
    let mut strong_failures = Vec::new();
    for e in EigScanConfig::strong_grid() {
        let s = find(&rows_strong, e, 1, ZetaMode::Single);
        let d = find(&rows_strong, e, 2, ZetaMode::Distilled);
        let t = find(&rows_strong, e, 2, ZetaMode::Tensor);
        if !(s < 0.0 && s.abs() < d.abs() && d.abs() <= t.abs() + 1e-12) {
            strong_failures.push(format!(
                "{e}: |s|={:.4} |d|={:.4} |t|={:.4}",
                s.abs(),
                d.abs(),
                t.abs()
            ));
        }
    }
    let rows_weak = eig_scan(&EigScanConfig {
        epsilons: EigScanConfig::weak_grid(),
        ..EigScanConfig::default()
    })?;
    let mut weak_failures = 0;
    for e in EigScanConfig::weak_grid() {
        for n in [2, 3, 4] {
            let d = find(&rows_weak, e, n, ZetaMode::Distilled);
            let t = find(&rows_weak, e, n, ZetaMode::Tensor);
            if d < -1e-10 || t >= -1e-6 {
                weak_failures += 1;
            }
        }
    }
    let mut detail = format!(
        "strong grid: {}/24 ε fail the ordering; weak grid: {weak_failures}/75 failures",
        strong_failures.len()
    );
    if let (Some(first), Some(last)) = (strong_failures.first(), strong_failures.last()) {
        detail.push_str(&format!(" [first {first}; last {last}]"));
    }
    outcome(strong_failures.is_empty() && weak_failures == 0, detail)
}

/// Closed forms for ΔD and ΔD₂ against direct numerics on a 19×37 grid.
fn closed_forms() -> Result<Outcome> {
    let lambda = CoarseGrainingMap::paper16();
    let (u1, u13, v4, v16) = xform_entries(&paper_u16());
    let (mut single, mut two): (f64, f64) = (0.0, 0.0);
    for e in [0.1, 0.2, 0.3, 0.4] {
        let m = CollisionalModel::new(e)?;
        for i in 0..19 {
            for j in 0..37 {
                let (theta, phi) = (PI * i as f64 / 18.0, 2.0 * PI * j as f64 / 36.0);
                let pair = bloch_pair(theta, phi);
                single = single.max((delta_d(&m, &pair)? - analytic_delta_d(e, theta, phi)).abs());
                let numeric = delta_d_n(&m, lambda.channel(), &pair)?;
                two = two.max((numeric - analytic_delta_d2(e, theta, u1, u13, v4, v16)).abs());
            }
        }
    }
    outcome(
        single <= 1e-10 && two <= 1e-10,
        format!("worst single-copy {single:.2e}, two-copy {two:.2e}"),
    )
}

/// Randomized property suites, 50+ cases each.
fn property_suites() -> Result<Outcome> {
    let mut rng = SplitMix64::new(20_240_601);
    let mut failures = Vec::new();

    let mut closure_worst: f64 = 0.0;
    for k in 0..60 {
        let a = random_kraus_channel(&mut rng, 2, 2, 1 + k % 4)?;
        let b = random_kraus_channel(&mut rng, 2, 2, 1 + (k / 4) % 4)?;
        let r = is_cptp(&compose(&a, &b)?, 1e-10);
        closure_worst = closure_worst
            .max((-r.min_choi_eig).max(0.0))
            .max(r.tp_defect);
    }
    if closure_worst > 1e-10 {
        failures.push("closure");
    }

    let mut contraction_worst = f64::NEG_INFINITY;
    for k in 0..60 {
        let c = random_kraus_channel(&mut rng, 2, 2, 1 + k % 4)?;
        let (map, dim) = if k % 2 == 0 {
            (c.into_map(), 2)
        } else {
            (tensor(&c, &QuantumChannel::identity(2)), 4)
        };
        let a = random_hermitian(&mut rng, dim);
        contraction_worst = contraction_worst.max(trace_norm(&map.apply(&a)?)? - trace_norm(&a)?);
    }
    if contraction_worst > 1e-12 {
        failures.push("contraction");
    }

    let mut divisibility_worst: f64 = 0.0;
    for k in 0..50 {
        let e = rng.uniform(0.0, 0.49);
        let m = CollisionalModel::new(e)?;
        let n = 2 + k % 2;
        let lhs = compose(
            &tensor_power(&m.v21()?, n)?,
            &tensor_power(&m.lambda1(), n)?,
        )?;
        let rhs = tensor_power(&m.lambda2(), n)?;
        divisibility_worst =
            divisibility_worst.max(lhs.superoperator().max_abs_diff(rhs.superoperator()));
    }
    if divisibility_worst > 1e-10 {
        failures.push("divisibility");
    }

    let lambda = CoarseGrainingMap::paper16();
    let mut calibration_worst: f64 = 0.0;
    for _ in 0..60 {
        let rho = bloch_state_polar(
            rng.uniform(-1.0, 1.0),
            rng.uniform(0.0, PI),
            rng.uniform(0.0, 2.0 * PI),
        );
        let p = rho[(0, 0)].re;
        let out = lambda.channel().apply(&kron(&rho, &rho))?;
        calibration_worst = calibration_worst
            .max(out.max_abs_diff(&ComplexMatrix::diag_real(&[p * p, 1.0 - p * p])));
    }
    if calibration_worst > 1e-12 {
        failures.push("calibration");
    }

    outcome(
        failures.is_empty(),
        format!(
            "closure {closure_worst:.1e}, contraction {contraction_worst:.1e}, divisibility {divisibility_worst:.1e}, calibration {calibration_worst:.1e}{}",
            if failures.is_empty() { String::new() } else { format!(" failing: {failures:?}") }
        ),
    )
}

/// Optimized three-copy dilation beats ΔD₂ and ΔD somewhere on the grid.
fn optimizer_reproduction() -> Result<Outcome> {
    let start = Instant::now();
    let cfg = OptimizeConfig {
        copies: 3,
        epsilon: 0.4,
        restarts: 20,
        ..OptimizeConfig::default()
    };
    let result = optimize_unitary(&cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    let model = CollisionalModel::new(0.4)?;
    let three = BackflowEvaluator::new(
        model,
        CoarseGrainingMap::from_xform(&result.params, "optimized")?,
    );
    let two = BackflowEvaluator::new(model, CoarseGrainingMap::paper16());
    let thetas = nmdistill::experiments::theta_grid(181);
    let phis = nmdistill::experiments::phi_grid(361);
    let (mut hits, mut max_d3) = (0usize, f64::NEG_INFINITY);
    for &theta in &thetas {
        for &phi in &phis {
            let (dd, d3) = three.eval(theta, phi)?;
            let (_, d2) = two.eval(theta, phi)?;
            max_d3 = max_d3.max(d3);
            if d3 > d2 && d2 > dd && dd > 0.0 {
                hits += 1;
            }
        }
    }
    let max_dd = analytic_delta_d(0.4, 0.0, 0.0);
    outcome(
        hits > 0 && elapsed < 600.0,
        format!(
            "{hits} grid points with ΔD₃ > ΔD₂ > ΔD > 0; objective {:.6}; max ΔD₃ {max_d3:.6} vs max ΔD {max_dd:.2} ({}, not gated); {elapsed:.1}s",
            result.objective,
            if max_d3 > max_dd { "exceeds" } else { "does not exceed" }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 7] = [
        ("1 global maximum of ΔD₂ − ΔD", global_maximum),
        ("2 strong success / weak failure", regime_signatures),
        ("3 coarse-graining only", coarse_graining_only),
        ("4 ζ orderings", zeta_orderings),
        ("5 closed-form agreement", closed_forms),
        ("6 property suites", property_suites),
        ("7 optimizer reproduction", optimizer_reproduction),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= passed;
        println!(
            "{} criterion {name}: {detail}",
            if passed { "PASS" } else { "FAIL" }
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
