//! Parameter sweeps: one ensemble per axis value.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::clusters;
use crate::engine::{run, SimConfig};
use crate::error::{Error, Result};
use crate::format::sig9;

/// Seed stride between consecutive sweep points.
pub const POINT_SEED_STRIDE: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Lambda,
    Rho,
    P,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::Rho => "rho",
            SweepAxis::P => "p",
        }
    }

    fn apply(self, cfg: &mut SimConfig, value: f64) {
        match self {
            SweepAxis::Lambda => cfg.lambda = value,
            SweepAxis::Rho => cfg.rho = value,
            SweepAxis::P => cfg.recommender.p = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub base: SimConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub runs_per_point: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Enables the mean largest-cluster column when set.
    #[serde(default)]
    pub omega: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::invalid("values", "empty"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "non-finite entry"));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("values", "must be strictly increasing"));
        }
        if self.runs_per_point == 0 {
            return Err(Error::invalid("runs_per_point", "must be at least 1"));
        }
        if let Some(omega) = self.omega {
            if !(omega > 0.0 && omega < 1.0) {
                return Err(Error::invalid("omega", format!("{omega} outside (0, 1)")));
            }
        }
        self.base.validate()?;
        for m in 0..self.values.len() {
            self.point_config(m).validate().map_err(|e| match e {
                Error::Invalid { reason, .. } => Error::invalid(
                    "values",
                    format!("{} = {}: {reason}", self.axis.name(), self.values[m]),
                ),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Configuration for point `m`, with the seed left at the base value.
    pub fn point_config(&self, m: usize) -> SimConfig {
        let mut cfg = self.base.clone();
        self.axis.apply(&mut cfg, self.values[m]);
        cfg
    }

    /// Seed of run `q` at point `m`.
    pub fn seed(&self, m: usize, q: usize) -> u64 {
        self.base_seed
            .wrapping_add(m as u64 * POINT_SEED_STRIDE)
            .wrapping_add(q as u64)
    }
}

/// Aggregates at one axis value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub mean_abs_o: f64,
    pub var_abs_o: f64,
    pub prob_positive: f64,
    pub max_cluster_fraction_mean: Option<f64>,
}

struct RunSummary {
    abs_order: f64,
    signed_order: f64,
    max_cluster: Option<f64>,
}

/// Execute the sweep on the current rayon pool. Every (point, run) pair is
/// an independent task; results are merged in (point, run) order, so the
/// output does not depend on the pool size.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let runs = spec.runs_per_point;
    let tasks: Vec<(usize, usize)> = (0..spec.values.len())
        .flat_map(|m| (0..runs).map(move |q| (m, q)))
        .collect();
    let summaries: Vec<RunSummary> = tasks
        .par_iter()
        .map(|&(m, q)| {
            let mut cfg = spec.point_config(m);
            cfg.seed = spec.seed(m, q);
            let res = run(&cfg)?;
            let max_cluster = spec
                .omega
                .map(|omega| clusters(&res.final_grid, omega).map(|c| c.max_cluster_fraction))
                .transpose()?;
            Ok(RunSummary {
                abs_order: res.abs_order_average,
                signed_order: res.order_average,
                max_cluster,
            })
        })
        .collect::<Result<_>>()?;

    Ok(summaries
        .chunks(runs)
        .zip(&spec.values)
        .map(|(chunk, &value)| {
            let r = chunk.len() as f64;
            let mean = chunk.iter().map(|s| s.abs_order).sum::<f64>() / r;
            let var = chunk.iter().map(|s| (s.abs_order - mean).powi(2)).sum::<f64>() / r;
            let positive = chunk.iter().filter(|s| s.signed_order > 0.0).count() as f64 / r;
            let max_cluster_fraction_mean = spec
                .omega
                .map(|_| chunk.iter().map(|s| s.max_cluster.unwrap_or(0.0)).sum::<f64>() / r);
            SweepRow {
                value,
                mean_abs_o: mean,
                var_abs_o: var,
                prob_positive: positive,
                max_cluster_fraction_mean,
            }
        })
        .collect())
}

pub fn sweep_csv(axis: SweepAxis, rows: &[SweepRow]) -> String {
    let with_clusters = rows.iter().any(|r| r.max_cluster_fraction_mean.is_some());
    let mut out = format!("{},mean_abs_O,var_abs_O,prob_positive", axis.name());
    if with_clusters {
        out.push_str(",max_cluster_fraction_mean");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}",
            sig9(row.value),
            sig9(row.mean_abs_o),
            sig9(row.var_abs_o),
            sig9(row.prob_positive)
        ));
        if let Some(c) = row.max_cluster_fraction_mean {
            out.push_str(&format!(",{}", sig9(c)));
        }
        out.push('\n');
    }
    out
}
