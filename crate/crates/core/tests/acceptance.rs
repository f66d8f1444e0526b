//! Acceptance suite. Each test checks one criterion at its pinned tolerance
//! and prints a `[PASS]`/`[FAIL]` line before asserting.
//!
//! Run with `cargo test -p kinetic-opinion --test acceptance -- --nocapture`
//! (the result lines are printed either way).

mod common;

use std::time::Instant;

use kinetic_opinion::analysis::cluster_sizes;
use kinetic_opinion::engine::Simulation;
use kinetic_opinion::theory::{lambda_critical, log_drift, predicted_order};
use kinetic_opinion::{
    fit_k, run, run_from, run_meanfield, run_sweep, Boundary, Kernel, MeanFieldVariant, OpinionGrid,
    RecommenderConfig, RecommenderMode, SimConfig, SweepAxis, SweepRow, SweepSpec,
};
use kinetic_opinion::sweep::sweep_csv;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

use common::{flood_fill_sizes, report};

fn verdict(id: &str, what: &str, ok: bool, detail: String) {
    report(&format!("[{}] {id} {what}: {detail}", if ok { "PASS" } else { "FAIL" }));
    assert!(ok, "{id} {what} failed: {detail}");
}

fn lattice(lambda: f64, rho: f64, recommender: RecommenderConfig) -> SimConfig {
    SimConfig {
        n: 50,
        lambda,
        rho,
        recommender,
        sweeps_total: 2000,
        sweeps_measure: 500,
        ..SimConfig::default()
    }
}

fn sweep(base: SimConfig, axis: SweepAxis, values: &[f64], runs: usize, base_seed: u64, omega: Option<f64>) -> Vec<SweepRow> {
    run_sweep(&SweepSpec {
        base,
        axis,
        values: values.to_vec(),
        runs_per_point: runs,
        base_seed,
        omega,
    })
    .expect("valid sweep")
}

fn single(cfg: SimConfig, runs: usize, base_seed: u64, omega: Option<f64>) -> SweepRow {
    let lambda = cfg.lambda;
    sweep(cfg, SweepAxis::Lambda, &[lambda], runs, base_seed, omega).remove(0)
}

fn none() -> RecommenderConfig {
    RecommenderConfig::default()
}

/// Linear interpolation of the first upward crossing of `level`.
fn crossing(xs: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    xs.windows(2).zip(ys.windows(2)).find_map(|(x, y)| {
        (y[0] < level && y[1] >= level).then(|| x[0] + (level - y[0]) * (x[1] - x[0]) / (y[1] - y[0]))
    })
}

#[test]
fn c1_critical_point_full_connectivity() {
    let start = Instant::now();
    let lambdas = [0.60, 0.62, 0.64, 0.66, 0.68, 0.70, 0.72, 0.74, 0.76, 0.90];
    let rows = sweep(lattice(0.9, 1.0, none()), SweepAxis::Lambda, &lambdas, 20, 1_000, None);
    let elapsed = start.elapsed().as_secs_f64();
    let means: Vec<f64> = rows.iter().map(|r| r.mean_abs_o).collect();
    let low = means[0];
    let high = means[lambdas.len() - 1];
    let at = crossing(&lambdas, &means, 0.5);
    let located = at.is_some_and(|l| (0.64..=0.72).contains(&l));
    let curve: Vec<String> = lambdas.iter().zip(&means).map(|(l, m)| format!("{l:.2}:{m:.3}")).collect();
    let ok = low < 0.10 && high > 0.90 && located && elapsed < 300.0;
    verdict(
        "C1",
        "critical point",
        ok,
        format!(
            "|O|(0.60)={low:.4} (<0.10), |O|(0.90)={high:.4} (>0.90), half-height crossing at {} (in [0.64,0.72]), {elapsed:.1}s (<300s); curve {}",
            at.map_or("none".into(), |l| format!("{l:.4}")),
            curve.join(" ")
        ),
    );
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let inner: f64 = (1..intervals)
        .map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h))
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn c2_theory_self_consistency() {
    let lc = lambda_critical();
    let integral = simpson(|e| (lc * (1.0 + e)).ln(), 0.0, 1.0, 4000);
    let predicted = predicted_order(0.9, 0.7).unwrap();
    let lambdas = [0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.99];
    let mut worst: f64 = 0.0;
    for k in [0.7, 0.35, 1.5] {
        let pts: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, predicted_order(l, k).unwrap())).collect();
        worst = worst.max((fit_k(&pts).unwrap() - k).abs());
    }
    let ok = integral.abs() < 1e-10 && (predicted - 0.98882).abs() < 1e-5 && worst < 1e-4;
    verdict(
        "C2",
        "theory self-consistency",
        ok,
        format!(
            "quadrature {integral:.2e} (|.|<1e-10), predicted(0.9,0.7)={predicted:.6} (0.98882±1e-5), worst fit_k error {worst:.2e} (<1e-4)"
        ),
    );
}

#[test]
fn c3_locality_suppresses_order() {
    let rhos = [0.1, 0.3, 0.5, 1.0];
    let runs = 20;
    let rows = sweep(lattice(0.9, 1.0, none()), SweepAxis::Rho, &rhos, runs, 3_000, None);
    let means: Vec<f64> = rows.iter().map(|r| r.mean_abs_o).collect();
    let se: Vec<f64> = rows.iter().map(|r| (r.var_abs_o / runs as f64).sqrt()).collect();
    let gap_ok = means[0] < means[3] - 0.2;
    // A violation is a decrease between consecutive rho values larger than 2 sigma.
    let violations = (0..3)
        .filter(|&k| {
            let sigma = (se[k].powi(2) + se[k + 1].powi(2)).sqrt();
            means[k] - means[k + 1] > 2.0 * sigma
        })
        .count();
    let ok = gap_ok && violations <= 1;
    let curve: Vec<String> = rhos.iter().zip(&means).map(|(r, m)| format!("{r}:{m:.3}")).collect();
    verdict(
        "C3",
        "locality suppresses order",
        ok,
        format!(
            "|O|(0.1)={:.4} (<|O|(1.0)-0.2={:.4}); 2-sigma decreases={violations} (<=1); curve {}",
            means[0],
            means[3] - 0.2,
            curve.join(" ")
        ),
    );
}

#[test]
fn c4_percolation() {
    let full = sweep(lattice(0.9, 1.0, none()), SweepAxis::Lambda, &[0.6, 0.95], 20, 4_000, Some(0.99));
    let local = single(lattice(0.9, 0.2, none()), 20, 4_500, Some(0.99));
    let c = |r: &SweepRow| r.max_cluster_fraction_mean.expect("omega set");
    let (low, high, pocket) = (c(&full[0]), c(&full[1]), c(&local));
    let ok = low < 0.1 && high > 0.8 && pocket < 0.5;
    verdict(
        "C4",
        "percolation",
        ok,
        format!(
            "rho=1: max cluster {low:.4} at lambda=0.6 (<0.1), {high:.4} at lambda=0.95 (>0.8); rho=0.2, lambda=0.9: {pocket:.4} (<0.5)"
        ),
    );
}

#[test]
fn c5_recommender_restores_order() {
    let fair = single(lattice(0.9, 0.1, RecommenderConfig::fair(0.05)), 20, 5_000, None);
    let bare = single(lattice(0.9, 0.1, none()), 20, 5_000, None);
    let ok = fair.mean_abs_o > 0.9 && bare.mean_abs_o < 0.7;
    verdict(
        "C5",
        "recommender restores order",
        ok,
        format!(
            "fair p=0.05: mean |O|={:.4} (>0.9); no recommender: {:.4} (<0.7)",
            fair.mean_abs_o, bare.mean_abs_o
        ),
    );
}

#[test]
fn c6_fair_recommender_unbiased() {
    let row = single(lattice(0.9, 0.1, RecommenderConfig::fair(0.05)), 60, 6_000, None);
    let ok = (0.30..=0.70).contains(&row.prob_positive);
    verdict(
        "C6",
        "fair recommender unbiased",
        ok,
        format!("P[O_a>0]={:.4} over 60 runs (in [0.30,0.70])", row.prob_positive),
    );
}

#[test]
fn c7_mischievous_steering() {
    let rows = sweep(
        lattice(0.9, 0.1, RecommenderConfig::mischievous(0.05)),
        SweepAxis::Lambda,
        &[0.5, 0.95],
        40,
        7_000,
        None,
    );
    let (low, high) = (rows[0].prob_positive, rows[1].prob_positive);
    let ok = low >= 0.95 && (0.3..=0.7).contains(&high);
    verdict(
        "C7",
        "mischievous steering",
        ok,
        format!("P[O_a>0]={low:.4} at lambda=0.5 (>=0.95), {high:.4} at lambda=0.95 (in [0.3,0.7])"),
    );
}

fn fuzz_range_violations(total_updates: usize) -> usize {
    let mut rng = Pcg64Mcg::seed_from_u64(8_001);
    let modes = [RecommenderMode::None, RecommenderMode::Fair, RecommenderMode::Mischievous];
    let mut done = 0;
    let mut violations = 0;
    let mut round = 0u64;
    while done < total_updates {
        let cfg = SimConfig {
            n: 8,
            lambda: rng.random_range(0.0..=1.0),
            rho: rng.random_range(0.05..1.2),
            boundary: if round.is_multiple_of(2) { Boundary::Open } else { Boundary::Periodic },
            kernel: if round.is_multiple_of(3) { Kernel::Symmetric } else { Kernel::Asymmetric },
            recommender: RecommenderConfig {
                mode: modes[(round % 3) as usize],
                p: rng.random_range(0.0..=1.0),
            },
            seed: round,
            ..SimConfig::default()
        };
        let mut sim = Simulation::new(cfg).unwrap();
        for _ in 0..10_000 {
            sim.micro_update();
            if sim.grid().opinions().iter().any(|o| !(-1.0..=1.0).contains(o)) {
                violations += 1;
            }
        }
        done += 10_000;
        round += 1;
    }
    violations
}

fn cluster_oracle_mismatches(grids: usize) -> usize {
    let mut rng = Pcg64Mcg::seed_from_u64(8_002);
    let mut mismatches = 0;
    for t in 0..grids {
        let n = rng.random_range(2..=8);
        let boundary = if t % 2 == 0 { Boundary::Open } else { Boundary::Periodic };
        let ops = (0..n * n).map(|_| rng.random_range(-1i32..=1) as f64).collect();
        let g = OpinionGrid::new(n, ops, boundary).unwrap();
        let (mut pos, mut neg) = cluster_sizes(&g, 0.99).unwrap();
        let mut fpos = flood_fill_sizes(&g, |o| o > 0.99);
        let mut fneg = flood_fill_sizes(&g, |o| o < -0.99);
        for v in [&mut pos, &mut neg, &mut fpos, &mut fneg] {
            v.sort_unstable();
        }
        if pos != fpos || neg != fneg {
            mismatches += 1;
        }
    }
    mismatches
}

fn determinism_holds() -> (bool, bool) {
    let cfg = SimConfig {
        n: 20,
        lambda: 0.8,
        rho: 0.2,
        recommender: RecommenderConfig::mischievous(0.1),
        sweeps_total: 200,
        sweeps_measure: 50,
        seed: 99,
        ..SimConfig::default()
    };
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    let repeat = a == b && a.series_csv() == b.series_csv() && a.final_grid.to_csv() == b.final_grid.to_csv();

    let spec = SweepSpec {
        base: SimConfig {
            recommender: RecommenderConfig::fair(0.05),
            ..cfg
        },
        axis: SweepAxis::Lambda,
        values: vec![0.6, 0.75, 0.9],
        runs_per_point: 4,
        base_seed: 17,
        omega: Some(0.99),
    };
    let csv_on = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sweep_csv(spec.axis, &run_sweep(&spec).unwrap()))
    };
    let merged = csv_on(1) == csv_on(8);
    (repeat, merged)
}

fn sign_equivariance_holds() -> bool {
    let mut ok = true;
    for (k, mode) in [RecommenderMode::None, RecommenderMode::Fair].into_iter().enumerate() {
        for boundary in [Boundary::Open, Boundary::Periodic] {
            let cfg = SimConfig {
                n: 16,
                lambda: 0.85,
                rho: 0.25,
                boundary,
                recommender: RecommenderConfig { mode, p: 0.2 },
                sweeps_total: 150,
                sweeps_measure: 50,
                seed: 500 + k as u64,
                ..SimConfig::default()
            };
            let g = OpinionGrid::init_random(16, 77 + k as u64, -1.0, 1.0).unwrap();
            let mut sorted = g.opinions().to_vec();
            sorted.sort_by(f64::total_cmp);
            assert!(sorted.windows(2).all(|w| w[0] < w[1]), "initial grid has ties");
            let up = run_from(&cfg, g.clone()).unwrap();
            let down = run_from(&cfg, g.negated()).unwrap();
            ok &= up.order_series.iter().zip(&down.order_series).all(|(a, b)| *a == -*b);
            ok &= down.final_grid == up.final_grid.negated();
        }
    }
    ok
}

/// Worst drift deviation in units of its standard error.
fn meanfield_drift_z() -> Vec<(f64, f64)> {
    let steps = 1000;
    [0.5, lambda_critical(), 0.9]
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            // Start far below the clamp so the walk never reflects in 1000 steps.
            let o0 = 1e-150_f64;
            let traj = run_meanfield(lambda, MeanFieldVariant::Multiplicative, steps, 8_100 + i as u64, o0).unwrap();
            assert!(traj.iter().all(|o| o.abs() < 1.0 && *o > 0.0));
            let logs: Vec<f64> = std::iter::once(o0).chain(traj).map(|o| o.ln()).collect();
            let inc: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
            let mean = inc.iter().sum::<f64>() / steps as f64;
            let var = inc.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (steps - 1) as f64;
            let se = (var / steps as f64).sqrt();
            (lambda, (mean - log_drift(lambda)) / se)
        })
        .collect()
}

#[test]
fn c8_property_suites() {
    let violations = fuzz_range_violations(1_000_000);
    let mismatches = cluster_oracle_mismatches(500);
    let (repeat, merged) = determinism_holds();
    let equivariant = sign_equivariance_holds();
    let drift = meanfield_drift_z();
    let drift_ok = drift.iter().all(|(_, z)| z.abs() < 3.0);

    let parts = [
        ("range fuzz", violations == 0, format!("{violations} violations in 1e6 micro-updates")),
        ("cluster oracle", mismatches == 0, format!("{mismatches} mismatches on 500 grids")),
        ("determinism", repeat, "identical RunResult and CSV bytes on repeat".to_string()),
        ("parallel merge", merged, "1-worker vs 8-worker sweep CSV byte-identical".to_string()),
        ("sign equivariance", equivariant, "negated initial grid gives negated series".to_string()),
        (
            "mean-field drift",
            drift_ok,
            drift
                .iter()
                .map(|(l, z)| format!("lambda={l:.4}: z={z:.2}"))
                .collect::<Vec<_>>()
                .join(", ")
                + " (|z|<3)",
        ),
    ];
    for (name, ok, detail) in &parts {
        report(&format!("  [{}] C8 {name}: {detail}", if *ok { "PASS" } else { "FAIL" }));
    }
    let all = parts.iter().all(|p| p.1);
    verdict("C8", "property suites", all, format!("{}/6 parts pass", parts.iter().filter(|p| p.1).count()));
}
