//! Cluster statistics, ensembles of independent runs, and curve fitting.

use rayon::prelude::*;

use crate::engine::{run, RunResult, SimConfig};
use crate::error::{Error, Result};
use crate::format::sig9;
use crate::lattice::{Boundary, OpinionGrid};
use crate::theory::{lambda_critical, predicted_order};

/// Largest-cluster statistics at threshold `omega`.
///
/// Clusters are 4-connected components of cells with `O > omega` (positive)
/// or `O < -omega` (negative). Fractions are relative to `n * n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub omega: f64,
    pub max_cluster_fraction: f64,
    pub cluster_count_pos: usize,
    pub cluster_count_neg: usize,
    pub max_pos_fraction: f64,
    pub max_neg_fraction: f64,
}

impl ClusterReport {
    pub const CSV_HEADER: &'static str = "omega,max_cluster_fraction,pos_count,neg_count,max_pos,max_neg";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            sig9(self.omega),
            sig9(self.max_cluster_fraction),
            self.cluster_count_pos,
            self.cluster_count_neg,
            sig9(self.max_pos_fraction),
            sig9(self.max_neg_fraction)
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", Self::CSV_HEADER, self.csv_row())
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Sizes of the 4-connected components of the cells selected by `member`,
/// in order of each component's first cell (row-major).
fn component_sizes(grid: &OpinionGrid, member: impl Fn(f64) -> bool) -> Vec<usize> {
    let n = grid.n();
    let ops = grid.opinions();
    let inside: Vec<bool> = ops.iter().map(|&o| member(o)).collect();
    let mut sets = DisjointSet::new(ops.len());
    let periodic = grid.boundary() == Boundary::Periodic;
    for i in 0..n {
        for j in 0..n {
            let k = i * n + j;
            if !inside[k] {
                continue;
            }
            // right and down neighbors cover every edge once
            if j + 1 < n {
                if inside[k + 1] {
                    sets.union(k, k + 1);
                }
            } else if periodic && inside[i * n] {
                sets.union(k, i * n);
            }
            if i + 1 < n {
                if inside[k + n] {
                    sets.union(k, k + n);
                }
            } else if periodic && inside[j] {
                sets.union(k, j);
            }
        }
    }
    let mut sizes = Vec::new();
    for (k, &member) in inside.iter().enumerate() {
        if member && sets.find(k) == k {
            sizes.push(sets.size[k]);
        }
    }
    sizes
}

/// Component sizes over `{O > omega}` and `{O < -omega}`.
pub fn cluster_sizes(grid: &OpinionGrid, omega: f64) -> Result<(Vec<usize>, Vec<usize>)> {
    check_omega(omega)?;
    Ok((
        component_sizes(grid, |o| o > omega),
        component_sizes(grid, |o| o < -omega),
    ))
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::invalid("omega", format!("{omega} outside (0, 1)")));
    }
    Ok(())
}

pub fn clusters(grid: &OpinionGrid, omega: f64) -> Result<ClusterReport> {
    let (pos, neg) = cluster_sizes(grid, omega)?;
    let total = grid.len() as f64;
    let max_pos_fraction = pos.iter().copied().max().unwrap_or(0) as f64 / total;
    let max_neg_fraction = neg.iter().copied().max().unwrap_or(0) as f64 / total;
    Ok(ClusterReport {
        omega,
        max_cluster_fraction: max_pos_fraction.max(max_neg_fraction),
        cluster_count_pos: pos.len(),
        cluster_count_neg: neg.len(),
        max_pos_fraction,
        max_neg_fraction,
    })
}

/// Aggregates over independent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub runs: usize,
    pub mean_abs_o: f64,
    /// Population variance (divisor `runs`) of the per-run `|O|` averages.
    pub var_abs_o: f64,
    /// Fraction of runs whose signed window average is strictly positive.
    pub prob_positive: f64,
}

impl EnsembleStats {
    pub fn from_runs(runs: &[RunResult]) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::invalid("runs", "ensemble needs at least one run"));
        }
        let r = runs.len() as f64;
        let mean = runs.iter().map(|x| x.abs_order_average).sum::<f64>() / r;
        let var = runs
            .iter()
            .map(|x| (x.abs_order_average - mean).powi(2))
            .sum::<f64>()
            / r;
        let positive = runs.iter().filter(|x| x.order_average > 0.0).count();
        Ok(EnsembleStats {
            runs: runs.len(),
            mean_abs_o: mean,
            var_abs_o: var,
            prob_positive: positive as f64 / r,
        })
    }
}

/// Run `runs` copies of `cfg` with seeds `base_seed..base_seed + runs`, in
/// parallel on the current rayon pool. Results come back in seed order.
pub fn ensemble_runs(cfg: &SimConfig, runs: usize, base_seed: u64) -> Result<Vec<RunResult>> {
    if runs == 0 {
        return Err(Error::invalid("runs_per_point", "must be at least 1"));
    }
    cfg.validate()?;
    (0..runs as u64)
        .into_par_iter()
        .map(|q| {
            let mut c = cfg.clone();
            c.seed = base_seed.wrapping_add(q);
            run(&c)
        })
        .collect()
}

pub fn ensemble(cfg: &SimConfig, runs: usize, base_seed: u64) -> Result<EnsembleStats> {
    EnsembleStats::from_runs(&ensemble_runs(cfg, runs, base_seed)?)
}

/// Least-squares fit of `k` in [`predicted_order`] to `(lambda, |O|)` points.
///
/// Only points with `lambda > lambda_c + 1e-6` take part; at least three are
/// required. The search is golden-section over `k` in `[0, 10]`.
pub fn fit_k(points: &[(f64, f64)]) -> Result<f64> {
    let cutoff = lambda_critical() + 1e-6;
    let usable: Vec<(f64, f64)> = points.iter().copied().filter(|&(l, _)| l > cutoff).collect();
    if usable.len() < 3 {
        return Err(Error::invalid(
            "points",
            format!("{} points above the critical conviction, need 3", usable.len()),
        ));
    }
    if let Some(&(l, o)) = usable.iter().find(|(l, o)| !l.is_finite() || !o.is_finite()) {
        return Err(Error::NonFinite(if l.is_finite() { o } else { l }));
    }
    let sse = |k: f64| -> f64 {
        usable
            .iter()
            .map(|&(l, o)| (predicted_order(l, k).expect("k >= 0") - o).powi(2))
            .sum()
    };
    Ok(golden_section(sse, 0.0, 10.0, 1e-6))
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > rel_tol * 0.5 * (a.abs() + b.abs()) && b - a > 1e-12 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
