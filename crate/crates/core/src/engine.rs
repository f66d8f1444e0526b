//! Seeded Monte Carlo runs on the opinion lattice.
//!
//! Updating is random sequential: each micro-update picks one individual
//! uniformly at random, and a sweep is `n * n` micro-updates. A run is a
//! pure function of its [`SimConfig`].

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::lattice::{rho_to_range, Boundary, CellIndex, InteractionRange, OpinionGrid};
use crate::opinion::{exchange, exchange_pair, meanfield_raw, MeanFieldVariant};
use crate::recommender::{RecommenderConfig, RecommenderMode};

/// Offset mixed into the run seed for the dynamics stream, so the initial
/// grid and the update sequence come from unrelated generators.
const DYNAMICS_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// Only the chosen individual changes opinion.
    #[default]
    Asymmetric,
    /// Both participants change opinion. Recommender interactions remain one-sided.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub n: usize,
    pub lambda: f64,
    pub rho: f64,
    pub boundary: Boundary,
    pub kernel: Kernel,
    pub recommender: RecommenderConfig,
    pub sweeps_total: usize,
    pub sweeps_measure: usize,
    pub seed: u64,
    pub init_low: f64,
    pub init_high: f64,
    pub meanfield_variant: MeanFieldVariant,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n: 50,
            lambda: 0.9,
            rho: 1.0,
            boundary: Boundary::Open,
            kernel: Kernel::Asymmetric,
            recommender: RecommenderConfig::default(),
            sweeps_total: 2000,
            sweeps_measure: 500,
            seed: 0,
            init_low: -1.0,
            init_high: 1.0,
            meanfield_variant: MeanFieldVariant::Multiplicative,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid("n", format!("{} is below 2", self.n)));
        }
        if !self.lambda.is_finite() || !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::invalid("lambda", format!("{} outside [0, 1]", self.lambda)));
        }
        if !self.rho.is_finite() || self.rho <= 0.0 {
            return Err(Error::invalid("rho", format!("{} must be positive", self.rho)));
        }
        self.recommender.validate()?;
        if self.sweeps_measure == 0 {
            return Err(Error::invalid("sweeps_measure", "must be positive"));
        }
        if self.sweeps_measure > self.sweeps_total {
            return Err(Error::invalid(
                "sweeps_measure",
                format!("{} exceeds sweeps_total {}", self.sweeps_measure, self.sweeps_total),
            ));
        }
        if !self.init_low.is_finite() || self.init_low < -1.0 {
            return Err(Error::invalid("init_low", format!("{} below -1", self.init_low)));
        }
        if !self.init_high.is_finite() || self.init_high > 1.0 {
            return Err(Error::invalid("init_high", format!("{} above 1", self.init_high)));
        }
        if self.init_low >= self.init_high {
            return Err(Error::invalid(
                "init_low",
                format!("{} is not below init_high {}", self.init_low, self.init_high),
            ));
        }
        Ok(())
    }

    pub fn range(&self) -> Result<InteractionRange> {
        rho_to_range(self.rho, self.n)
    }

    /// Mean-field trajectory for this configuration's conviction and variant.
    pub fn meanfield(&self, steps: usize, o0: f64) -> Result<Vec<f64>> {
        run_meanfield(self.lambda, self.meanfield_variant, steps, self.seed, o0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// `O(t)` after each sweep.
    pub order_series: Vec<f64>,
    /// Signed mean of `O(t)` over the measurement window.
    pub order_average: f64,
    /// Mean of `|O(t)|` over the measurement window.
    pub abs_order_average: f64,
    pub final_grid: OpinionGrid,
}

impl RunResult {
    /// `sweep,O` with one row per sweep, numbered from 1.
    pub fn series_csv(&self) -> String {
        series_csv(&self.order_series)
    }
}

pub fn series_csv(series: &[f64]) -> String {
    let mut out = String::from("sweep,O\n");
    for (t, o) in series.iter().enumerate() {
        out.push_str(&format!("{},{}\n", t + 1, sig9(*o)));
    }
    out
}

/// Mean opinion over the whole grid.
pub fn order_parameter(grid: &OpinionGrid) -> f64 {
    grid.mean()
}

/// Where the chosen individual's counterpart opinion comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    Recommender,
    Neighbor(CellIndex),
}

/// A single simulation: grid, configuration, and its private generator.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: SimConfig,
    range: InteractionRange,
    p: f64,
    grid: OpinionGrid,
    rng: Pcg64Mcg,
}

impl Simulation {
    /// Fresh simulation starting from the configured random initial grid.
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let grid = OpinionGrid::init_random(cfg.n, cfg.seed, cfg.init_low, cfg.init_high)?;
        Self::from_grid(cfg, grid)
    }

    /// Simulation starting from `grid`. The grid adopts the configured boundary.
    pub fn from_grid(cfg: SimConfig, grid: OpinionGrid) -> Result<Self> {
        cfg.validate()?;
        if grid.n() != cfg.n {
            return Err(Error::invalid(
                "n",
                format!("configured {} but initial grid has side {}", cfg.n, grid.n()),
            ));
        }
        let range = cfg.range()?;
        let p = cfg.recommender.effective_p();
        let rng = Pcg64Mcg::seed_from_u64(cfg.seed ^ DYNAMICS_STREAM);
        Ok(Simulation {
            grid: grid.with_boundary(cfg.boundary),
            range,
            p,
            rng,
            cfg,
        })
    }

    pub fn grid(&self) -> &OpinionGrid {
        &self.grid
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn range(&self) -> InteractionRange {
        self.range
    }

    pub fn into_grid(self) -> OpinionGrid {
        self.grid
    }

    /// Update one uniformly chosen individual.
    pub fn micro_update(&mut self) {
        let cells = self.grid.len();
        let c = self.rng.random_range(0..cells);
        let consult = self.cfg.recommender.mode != RecommenderMode::None && self.rng.random::<f64>() < self.p;
        if consult {
            let eps = self.rng.random::<f64>();
            self.interact_with_recommender(c, eps);
            return;
        }
        let j = self.grid.sample_partner_linear(c, self.range.r, &mut self.rng);
        let eps = self.rng.random::<f64>();
        match self.cfg.kernel {
            Kernel::Asymmetric => {
                let ops = self.grid.opinions_mut();
                ops[c] = exchange(ops[c], ops[j], self.cfg.lambda, eps);
            }
            Kernel::Symmetric => {
                let eps2 = self.rng.random::<f64>();
                let lambda = self.cfg.lambda;
                let ops = self.grid.opinions_mut();
                (ops[c], ops[j]) = exchange_pair(ops[c], ops[j], lambda, lambda, eps, eps2);
            }
        }
    }

    /// Apply one interaction with a caller-chosen individual, partner and noise.
    /// `eps2` is only used by the symmetric kernel with a neighbor partner.
    pub fn interact(&mut self, c: CellIndex, partner: Partner, eps: f64, eps2: f64) -> Result<()> {
        for (key, e) in [("epsilon", eps), ("epsilon2", eps2)] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::invalid(key, format!("{e} outside [0, 1]")));
            }
        }
        let c = self.grid.linear(c);
        match partner {
            Partner::Recommender => {
                if self.cfg.recommender.mode == RecommenderMode::None {
                    return Err(Error::invalid("recommender.mode", "no recommender configured"));
                }
                self.interact_with_recommender(c, eps);
            }
            Partner::Neighbor(other) => {
                let j = self.grid.linear(other);
                if j == c {
                    return Err(Error::invalid("partner", "an individual cannot interact with itself"));
                }
                let lambda = self.cfg.lambda;
                let kernel = self.cfg.kernel;
                let ops = self.grid.opinions_mut();
                match kernel {
                    Kernel::Asymmetric => ops[c] = exchange(ops[c], ops[j], lambda, eps),
                    Kernel::Symmetric => {
                        (ops[c], ops[j]) = exchange_pair(ops[c], ops[j], lambda, lambda, eps, eps2)
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn interact_with_recommender(&mut self, c: usize, eps: f64) {
        let lambda = self.cfg.lambda;
        let recommended = self
            .cfg
            .recommender
            .recommend_linear(self.grid.opinions(), c)
            .expect("recommender mode is set");
        let ops = self.grid.opinions_mut();
        ops[c] = exchange(ops[c], recommended, lambda, eps);
    }

    /// `n * n` micro-updates; returns the order parameter afterwards.
    pub fn sweep(&mut self) -> f64 {
        for _ in 0..self.grid.len() {
            self.micro_update();
        }
        order_parameter(&self.grid)
    }

    pub fn run(mut self) -> RunResult {
        let total = self.cfg.sweeps_total;
        let window = self.cfg.sweeps_measure;
        let order_series: Vec<f64> = (0..total).map(|_| self.sweep()).collect();
        let tail = &order_series[total - window..];
        let order_average = tail.iter().sum::<f64>() / window as f64;
        let abs_order_average = tail.iter().map(|o| o.abs()).sum::<f64>() / window as f64;
        RunResult {
            order_series,
            order_average,
            abs_order_average,
            final_grid: self.grid,
        }
    }
}

/// Run `cfg` from its seeded random initial grid.
pub fn run(cfg: &SimConfig) -> Result<RunResult> {
    Ok(Simulation::new(cfg.clone())?.run())
}

/// Run `cfg` from an explicit initial grid.
pub fn run_from(cfg: &SimConfig, grid: OpinionGrid) -> Result<RunResult> {
    Ok(Simulation::from_grid(cfg.clone(), grid)?.run())
}

/// Iterate the mean-field map `steps` times from `o0`. The returned
/// trajectory holds the `steps` values after each step (`o0` excluded).
pub fn run_meanfield(lambda: f64, variant: MeanFieldVariant, steps: usize, seed: u64, o0: f64) -> Result<Vec<f64>> {
    if !lambda.is_finite() || !(0.0..=1.0).contains(&lambda) {
        return Err(Error::invalid("lambda", format!("{lambda} outside [0, 1]")));
    }
    if !o0.is_finite() || o0.abs() > 1.0 {
        return Err(Error::invalid("o0", format!("{o0} outside [-1, 1]")));
    }
    if steps == 0 {
        return Err(Error::invalid("steps", "must be at least 1"));
    }
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let mut o = o0;
    Ok((0..steps)
        .map(|_| {
            o = meanfield_raw(o, lambda, rng.random::<f64>(), variant);
            o
        })
        .collect())
}
