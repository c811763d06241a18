//! Synthetic intraday panels and Monte Carlo experiments for the volatility
//! break tests.
//!
//! [`shape`] holds the volatility shapes `σ(u)` and their clocks
//! `G(t) = ∫₀ᵗ σ²`, [`ar`] the day-level AR(1) factors, [`scenario`] the
//! null and alternative data generating processes, and [`experiment`] the
//! replication runners.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ar;
pub mod error;
pub mod experiment;
pub mod scenario;
pub mod shape;

pub use ar::{ar1_series, switching_ar1, GFactorSeries};
pub use error::{Result, SimError};
pub use experiment::{
    estimator_distribution, rejection_rows, run_power_experiment, run_replication, run_replications,
    run_size_experiment, Estimator, RejectionRow, ReplicationOutcome, DEFAULT_LEVELS,
};
pub use scenario::{generate_panel, generate_panel_keyed, ito_path, price_panel, ArSpec, GridSampler, Hypothesis, ScenarioConfig};
pub use shape::SigmaShape;
