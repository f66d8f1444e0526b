//! Opinion recommenders.
//!
//! The recommender is global: it looks at every other individual in the
//! population, regardless of the interaction range, and returns the opinion
//! closest to the recipient's own.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CellIndex, OpinionGrid};
use crate::opinion::clamp_unit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecommenderMode {
    #[default]
    None,
    Fair,
    Mischievous,
}

/// Recommender mode plus the per-interaction probability of consulting it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecommenderConfig {
    #[serde(default)]
    pub mode: RecommenderMode,
    #[serde(default = "default_p")]
    pub p: f64,
}

fn default_p() -> f64 {
    0.05
}

impl Default for RecommenderConfig {
    fn default() -> Self {
        RecommenderConfig {
            mode: RecommenderMode::None,
            p: default_p(),
        }
    }
}

impl RecommenderConfig {
    pub fn fair(p: f64) -> Self {
        RecommenderConfig {
            mode: RecommenderMode::Fair,
            p,
        }
    }

    pub fn mischievous(p: f64) -> Self {
        RecommenderConfig {
            mode: RecommenderMode::Mischievous,
            p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p.is_finite() || !(0.0..=1.0).contains(&self.p) {
            return Err(Error::invalid("recommender.p", format!("{} outside [0, 1]", self.p)));
        }
        Ok(())
    }

    /// Probability actually used by the engine; zero when the mode is `none`.
    pub fn effective_p(&self) -> f64 {
        match self.mode {
            RecommenderMode::None => 0.0,
            _ => self.p,
        }
    }

    /// Opinion handed to the individual at linear index `c`, or `None` when
    /// no recommender is configured.
    pub(crate) fn recommend_linear(&self, opinions: &[f64], c: usize) -> Option<f64> {
        match self.mode {
            RecommenderMode::None => None,
            RecommenderMode::Fair => Some(nearest_opinion(opinions, c)),
            RecommenderMode::Mischievous => Some(reflect_upward(opinions[c], nearest_opinion(opinions, c))),
        }
    }
}

/// The opinion of the individual whose opinion is closest to that of `c`.
/// Ties go to the smallest row-major index.
pub fn recommend_fair(grid: &OpinionGrid, c: CellIndex) -> f64 {
    nearest_opinion(grid.opinions(), grid.linear(c))
}

/// The fair recommendation, reflected about the recipient's opinion whenever
/// it lies below it. The result is never below `O_c`.
pub fn recommend_mischievous(grid: &OpinionGrid, c: CellIndex) -> f64 {
    let own = grid.get(c);
    reflect_upward(own, recommend_fair(grid, c))
}

#[inline]
fn reflect_upward(own: f64, fair: f64) -> f64 {
    if fair < own {
        clamp_unit(2.0 * own - fair)
    } else {
        fair
    }
}

#[inline]
fn nearest_opinion(opinions: &[f64], c: usize) -> f64 {
    let own = opinions[c];
    let mut best = f64::INFINITY;
    let mut arg = usize::MAX;
    for (j, &o) in opinions.iter().enumerate() {
        let d = (o - own).abs();
        if d < best && j != c {
            best = d;
            arg = j;
        }
    }
    debug_assert!(arg != usize::MAX, "grid has a single cell");
    opinions[arg]
}
