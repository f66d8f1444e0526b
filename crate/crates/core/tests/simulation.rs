//! Full-size simulation examples at n = 50.

use kinetic_opinion::{ensemble, fit_k, run_sweep, SimConfig, SweepAxis, SweepSpec};

fn full_connectivity(lambda: f64) -> SimConfig {
    SimConfig {
        n: 50,
        lambda,
        rho: 1.0,
        ..SimConfig::default()
    }
}

#[test]
fn strong_conviction_polarizes() {
    let stats = ensemble(&full_connectivity(0.9), 20, 0).unwrap();
    assert!(stats.mean_abs_o >= 0.95, "mean |O| {}", stats.mean_abs_o);
}

#[test]
fn polarization_sign_is_a_coin_flip() {
    let stats = ensemble(&full_connectivity(0.9), 40, 10_000).unwrap();
    assert!((stats.prob_positive - 0.5).abs() <= 0.16, "P[+] {}", stats.prob_positive);
}

#[test]
fn fitted_decay_constant_at_desk_scale() {
    let spec = SweepSpec {
        base: full_connectivity(0.9),
        axis: SweepAxis::Lambda,
        values: vec![0.70, 0.75, 0.80, 0.85, 0.90, 0.95],
        runs_per_point: 10,
        base_seed: 20_000,
        omega: None,
    };
    let points: Vec<(f64, f64)> = run_sweep(&spec)
        .unwrap()
        .iter()
        .map(|r| (r.value, r.mean_abs_o))
        .collect();
    let k = fit_k(&points).unwrap();
    assert!((0.4..=1.0).contains(&k), "k = {k} from {points:?}");
}
