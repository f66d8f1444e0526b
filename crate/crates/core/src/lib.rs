//! Kinetic-exchange opinion dynamics on a square lattice.
//!
//! Individuals hold an opinion in `[-1, 1]` and update it through a noisy,
//! conviction-weighted exchange with a partner drawn from a Chebyshev
//! neighborhood of configurable range. A recommender can optionally hand the
//! individual the globally closest opinion instead (fair), or that opinion
//! reflected upward (mischievous).
//!
//! The crate is organised bottom-up:
//!
//! * [`opinion`]: the clamp and pairwise exchange kernels, plus the
//!   mean-field map of the order parameter.
//! * [`lattice`]: the grid, neighborhoods, partner sampling.
//! * [`recommender`]: fair and mischievous recommendation.
//! * [`engine`]: seeded, deterministic Monte Carlo runs.
//! * [`analysis`]: thresholded clusters, ensembles, fitting.
//! * [`theory`]: closed-form results (critical conviction and friends).
//! * [`sweep`]: ensembles across a parameter axis, with CSV output.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod format;
pub mod lattice;
pub mod opinion;
pub mod recommender;
pub mod sweep;
pub mod theory;

pub use analysis::{clusters, ensemble, fit_k, ClusterReport, EnsembleStats};
pub use engine::{order_parameter, run, run_from, run_meanfield, Kernel, RunResult, SimConfig, Simulation};
pub use error::{Error, Result};
pub use lattice::{Boundary, CellIndex, InteractionRange, OpinionGrid};
pub use opinion::{Conviction, MeanFieldVariant, NoiseDraw, Opinion};
pub use recommender::{RecommenderConfig, RecommenderMode};
pub use sweep::{run_sweep, SweepAxis, SweepRow, SweepSpec};
