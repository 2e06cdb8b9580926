use std::f64::consts::PI;

use nmdistill::experiments::{
    appendix_b, eig_scan, grid_sweep, max_diff, optimize_unitary, AppendixBCase, EigScanConfig,
    Objective, OptimizeConfig, SweepConfig, UnitarySource,
};
use nmdistill::io::{read_appendixb_csv, read_sweep_csv, write_appendixb_csv, write_sweep_csv};
use nmdistill::witness::ZetaMode;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
}

#[test]
fn weak_regime_two_copies_never_beat_nothing() {
    let cfg = SweepConfig {
        epsilons: vec![0.2],
        theta_points: 37,
        phi_points: 73,
        ..SweepConfig::default()
    };
    for r in grid_sweep(&cfg).unwrap() {
        assert!(r.delta_d_n >= r.delta_d - 1e-10, "{r:?}");
        assert!(r.delta_d <= 1e-10 && r.delta_d_n <= 1e-10, "{r:?}");
    }
}

#[test]
fn sweep_independent_of_thread_count() {
    let cfg = SweepConfig {
        epsilons: vec![0.3, 0.45],
        theta_points: 13,
        phi_points: 25,
        ..SweepConfig::default()
    };
    let one = pool(1).install(|| grid_sweep(&cfg).unwrap());
    let four = pool(4).install(|| grid_sweep(&cfg).unwrap());
    assert_eq!(one, four);
}

#[test]
fn sweep_csv_round_trip() {
    let cfg = SweepConfig {
        epsilons: vec![0.4],
        theta_points: 5,
        phi_points: 7,
        ..SweepConfig::default()
    };
    let rows = grid_sweep(&cfg).unwrap();
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows).unwrap();
    let back = read_sweep_csv(&buf[..]).unwrap();
    assert_eq!(back.len(), rows.len());
    for (b, r) in back.iter().zip(&rows) {
        assert!((b.delta_d_n - r.delta_d_n).abs() <= 1e-11 * r.delta_d_n.abs().max(1e-6));
        assert!((b.theta - r.theta).abs() <= 1e-11);
    }
}

#[test]
fn maxima_closed_under_reflection() {
    let cfg = SweepConfig {
        epsilons: vec![0.35],
        theta_points: 61,
        phi_points: 121,
        ..SweepConfig::default()
    };
    let report = max_diff(&cfg).unwrap();
    assert!(report.best >= report.grid_best);
    for a in &report.argmax {
        let mirrored = report.argmax.iter().any(|b| {
            (b.theta - (PI - a.theta)).abs() < 2e-3 * PI && (b.phi - a.phi).abs() < 2e-3 * PI
        });
        assert!(mirrored, "{a:?} has no mirror in {:?}", report.argmax);
    }
}

#[test]
fn weak_regime_distilled_zeta_nonnegative() {
    let cfg = EigScanConfig {
        epsilons: vec![0.05, 0.15, 0.25],
        modes: vec![ZetaMode::Tensor, ZetaMode::Distilled],
        ..EigScanConfig::default()
    };
    for r in eig_scan(&cfg).unwrap() {
        match r.mode {
            ZetaMode::Distilled => assert!(r.zeta >= -1e-10, "{r:?}"),
            _ => assert!(r.zeta < -1e-6, "{r:?}"),
        }
    }
}

#[test]
fn identity_decoder_reduces_to_single_copy() {
    let cfg = EigScanConfig {
        epsilons: vec![0.1, 0.4],
        copies: vec![1],
        unitary: UnitarySource::Identity,
        ..EigScanConfig::default()
    };
    let rows = eig_scan(&cfg).unwrap();
    for chunk in rows.chunks(3) {
        assert!((chunk[0].zeta - chunk[2].zeta).abs() < 1e-12, "{chunk:?}");
    }
}

#[test]
fn antipodal_pairs_never_gain() {
    let rows = appendix_b(&AppendixBCase::antipodal(37)).unwrap();
    for r in &rows {
        assert!(r.d_after <= r.d_before + 1e-12);
        assert!((r.d_after - r.theta.cos().abs()).abs() < 1e-12);
    }
    let mut buf = Vec::new();
    write_appendixb_csv(&mut buf, &rows).unwrap();
    assert_eq!(read_appendixb_csv(&buf[..]).unwrap().len(), 37);
}

#[test]
fn four_copy_optimizer_runs() {
    let cfg = OptimizeConfig {
        copies: 4,
        restarts: 4,
        max_iterations: 15,
        theta_points: 9,
        ..OptimizeConfig::default()
    };
    let r = optimize_unitary(&cfg).unwrap();
    assert_eq!(r.params.dim, 64);
    assert!(r.objective >= r.outcomes[0].history[0]);
    assert!(r.objective > 0.48, "{}", r.objective);
}

#[test]
fn gain_objective_is_thread_independent() {
    let cfg = OptimizeConfig {
        objective: Objective::MaxGain,
        restarts: 5,
        max_iterations: 20,
        theta_points: 13,
        ..OptimizeConfig::default()
    };
    let a = pool(1).install(|| optimize_unitary(&cfg).unwrap());
    let b = pool(3).install(|| optimize_unitary(&cfg).unwrap());
    assert_eq!(a, b);
    assert!(a.objective > 0.0);
}
