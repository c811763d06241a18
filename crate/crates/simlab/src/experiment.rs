//! Monte Carlo size, power and estimator experiments.
//!
//! Replication `m` of a scenario with master seed `s` draws everything from
//! `StreamKey::new(s).child(m)`, so results do not depend on how the
//! replications are scheduled across threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use volbreak_core::{analyze_returns, StreamKey, TestConfig};

use crate::error::{Result, SimError};
use crate::scenario::{generate_panel_keyed, Hypothesis, ScenarioConfig};

pub const DEFAULT_LEVELS: [f64; 3] = [0.10, 0.05, 0.01];

const PANEL_STREAM: u64 = 1;
const TEST_STREAM: u64 = 2;

/// P-values and change-point estimates from one simulated panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicationOutcome {
    pub shape_p: f64,
    pub total_p: f64,
    pub global_p: f64,
    pub fisher_statistic: f64,
    pub theta_shape: f64,
    pub theta_total: f64,
    pub theta_pooled: f64,
}

pub fn run_replication(cfg: &ScenarioConfig, tests: &TestConfig, rep: u64) -> Result<ReplicationOutcome> {
    let key = StreamKey::new(cfg.seed).child(rep);
    let panel = generate_panel_keyed(cfg, key.child(PANEL_STREAM))?;
    let a = analyze_returns(&panel, tests, key.child(TEST_STREAM))?;
    Ok(ReplicationOutcome {
        shape_p: a.shape.p_value,
        total_p: a.total.p_value,
        global_p: a.global.p_value,
        fisher_statistic: a.global.statistic,
        theta_shape: a.shape_cp.theta,
        theta_total: a.total_cp.theta,
        theta_pooled: a.pooled_theta,
    })
}

/// Replications `0..reps`, in replication order.
pub fn run_replications(cfg: &ScenarioConfig, tests: &TestConfig, reps: usize) -> Result<Vec<ReplicationOutcome>> {
    if reps == 0 {
        return Err(SimError::InvalidScenario("need at least one replication".into()));
    }
    cfg.validate()?;
    tests.validate()?;
    (0..reps as u64).into_par_iter().map(|m| run_replication(cfg, tests, m)).collect()
}

/// Rejection rates of the three tests at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionRow {
    pub scenario: String,
    pub shape: String,
    pub n: usize,
    pub k: usize,
    /// Break fraction; absent for the null scenarios.
    pub theta: Option<f64>,
    pub level: f64,
    pub shape_test: f64,
    pub total_test: f64,
    pub global_test: f64,
    pub reps: usize,
}

/// One row per level from already simulated outcomes.
pub fn rejection_rows(cfg: &ScenarioConfig, outcomes: &[ReplicationOutcome], levels: &[f64]) -> Vec<RejectionRow> {
    let reps = outcomes.len();
    let rate = |level: f64, p: fn(&ReplicationOutcome) -> f64| {
        outcomes.iter().filter(|o| p(o) <= level).count() as f64 / reps as f64
    };
    let shape = if cfg.hypothesis.is_null() {
        cfg.before.label()
    } else {
        format!("{}->{}", cfg.before.label(), cfg.after.label())
    };
    levels
        .iter()
        .map(|&level| RejectionRow {
            scenario: cfg.hypothesis.name().to_string(),
            shape: shape.clone(),
            n: cfg.n,
            k: cfg.k,
            theta: (!cfg.hypothesis.is_null()).then_some(cfg.theta),
            level,
            shape_test: rate(level, |o| o.shape_p),
            total_test: rate(level, |o| o.total_p),
            global_test: rate(level, |o| o.global_p),
            reps,
        })
        .collect()
}

fn check_levels(levels: &[f64]) -> Result<()> {
    match levels.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
        Some(a) => Err(SimError::InvalidScenario(format!("levels must lie in (0, 1], got {a}"))),
        None => Ok(()),
    }
}

/// Empirical size of the three tests under a null scenario.
pub fn run_size_experiment(
    cfg: &ScenarioConfig,
    tests: &TestConfig,
    reps: usize,
    levels: &[f64],
) -> Result<Vec<RejectionRow>> {
    if !cfg.hypothesis.is_null() {
        return Err(SimError::InvalidScenario(format!("size experiment needs a null scenario, got {}", cfg.hypothesis.name())));
    }
    check_levels(levels)?;
    Ok(rejection_rows(cfg, &run_replications(cfg, tests, reps)?, levels))
}

/// Empirical power of the three tests under an alternative.
pub fn run_power_experiment(
    cfg: &ScenarioConfig,
    tests: &TestConfig,
    reps: usize,
    levels: &[f64],
) -> Result<Vec<RejectionRow>> {
    if cfg.hypothesis.is_null() {
        return Err(SimError::InvalidScenario("power experiment needs an alternative scenario".into()));
    }
    check_levels(levels)?;
    Ok(rejection_rows(cfg, &run_replications(cfg, tests, reps)?, levels))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Shape,
    Total,
    Pooled,
}

impl Estimator {
    /// The estimator matched to the kind of change: shape for a pure shape
    /// change, total for a pure level change, pooled otherwise.
    pub fn for_hypothesis(h: Hypothesis) -> Self {
        match h {
            Hypothesis::HA1 => Estimator::Shape,
            Hypothesis::HA2 => Estimator::Total,
            _ => Estimator::Pooled,
        }
    }

    pub fn pick(self, o: &ReplicationOutcome) -> f64 {
        match self {
            Estimator::Shape => o.theta_shape,
            Estimator::Total => o.theta_total,
            Estimator::Pooled => o.theta_pooled,
        }
    }
}

/// `reps` independent draws of the chosen change-point estimator.
pub fn estimator_distribution(
    cfg: &ScenarioConfig,
    tests: &TestConfig,
    reps: usize,
    estimator: Estimator,
) -> Result<Vec<f64>> {
    Ok(run_replications(cfg, tests, reps)?.iter().map(|o| estimator.pick(o)).collect())
}
