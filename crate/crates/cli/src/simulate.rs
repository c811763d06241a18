//! The `simulate` subcommand: Monte Carlo tables and synthetic panels.

use std::io::Write;

use serde::Serialize;
use volbreak_core::TestConfig;
use volbreak_simlab::{
    estimator_distribution, generate_panel, price_panel, run_power_experiment, run_size_experiment, Estimator,
    Hypothesis, ScenarioConfig, SigmaShape,
};

use crate::error::{CliError, Result};
use crate::ingest::write_prices;
use crate::report::VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// Empirical size under a fixed volatility shape.
    Size,
    /// Empirical size when the AR coefficient of the daily scale switches mid-sample.
    Gchange,
    /// Empirical power under one of the alternatives.
    Power,
    /// Draws of a change-point estimator.
    Estimator,
    /// A single synthetic price panel in the input CSV format.
    Panel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisArg {
    H0,
    Ha1,
    Ha2,
    Ha3,
    Gchange,
}

impl From<HypothesisArg> for Hypothesis {
    fn from(h: HypothesisArg) -> Self {
        match h {
            HypothesisArg::H0 => Hypothesis::H0,
            HypothesisArg::Ha1 => Hypothesis::HA1,
            HypothesisArg::Ha2 => Hypothesis::HA2,
            HypothesisArg::Ha3 => Hypothesis::HA3,
            HypothesisArg::Gchange => Hypothesis::GChange,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorArg {
    Shape,
    Total,
    Pooled,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Shape => Estimator::Shape,
            EstimatorArg::Total => Estimator::Total,
            EstimatorArg::Pooled => Estimator::Pooled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateConfig {
    pub experiment: Experiment,
    pub hypothesis: HypothesisArg,
    pub shape: String,
    pub n: usize,
    pub k: usize,
    pub theta: f64,
    pub reps: usize,
    pub levels: Vec<f64>,
    pub estimator: Option<EstimatorArg>,
    pub seed: u64,
    pub tests: TestConfig,
}

impl SimulateConfig {
    fn scenario(&self) -> Result<ScenarioConfig> {
        let shape = SigmaShape::from_name(&self.shape)
            .ok_or_else(|| CliError::Config(format!("unknown shape `{}` (flat, slope, sine, ushape)", self.shape)))?;
        let hypothesis = match self.experiment {
            Experiment::Size => Hypothesis::H0,
            Experiment::Gchange => Hypothesis::GChange,
            _ => self.hypothesis.into(),
        };
        let cfg = match hypothesis {
            Hypothesis::H0 => ScenarioConfig::null(shape, self.n, self.k, self.seed),
            Hypothesis::GChange => ScenarioConfig::g_change(shape, self.n, self.k, self.seed),
            alt => ScenarioConfig::alternative(alt, self.theta, self.n, self.k, self.seed)?,
        };
        if self.experiment == Experiment::Power && hypothesis.is_null() {
            return Err(CliError::Config("power experiments need --hypothesis ha1, ha2 or ha3".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(CliError::Config("reps must be at least 1".into()));
        }
        if let Some(a) = self.levels.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
            return Err(CliError::Config(format!("levels must lie in (0, 1], got {a}")));
        }
        self.tests.validate().map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Sidecar describing how a table was produced.
#[derive(Debug, Serialize)]
pub struct Metadata<'a> {
    pub version: &'a str,
    pub config: &'a SimulateConfig,
    pub scenario: String,
    pub before_shape: String,
    pub after_shape: Option<String>,
}

/// Runs the experiment and writes its CSV output to `out`. Returns the
/// metadata sidecar contents.
pub fn simulate<W: Write>(cfg: &SimulateConfig, out: W) -> Result<String> {
    cfg.validate()?;
    let scenario = cfg.scenario()?;
    if cfg.experiment == Experiment::Panel {
        write_prices(&price_panel(&generate_panel(&scenario)?, 100.0)?, out)?;
        return metadata(cfg, &scenario);
    }
    let mut w = csv::Writer::from_writer(out);
    match cfg.experiment {
        Experiment::Size | Experiment::Gchange => {
            for row in run_size_experiment(&scenario, &cfg.tests, cfg.reps, &cfg.levels)? {
                w.serialize(row)?;
            }
        }
        Experiment::Power => {
            for row in run_power_experiment(&scenario, &cfg.tests, cfg.reps, &cfg.levels)? {
                w.serialize(row)?;
            }
        }
        Experiment::Estimator => {
            let est = cfg.estimator.map_or_else(|| Estimator::for_hypothesis(scenario.hypothesis), Estimator::from);
            let name = serde_json::to_value(est)?.as_str().unwrap_or_default().to_string();
            w.write_record(["replication", "estimator", "theta"])?;
            for (m, theta) in estimator_distribution(&scenario, &cfg.tests, cfg.reps, est)?.iter().enumerate() {
                w.write_record([m.to_string(), name.clone(), theta.to_string()])?;
            }
        }
        Experiment::Panel => unreachable!("handled above"),
    }
    w.flush().map_err(|e| CliError::io("<output>", e))?;
    metadata(cfg, &scenario)
}

fn metadata(cfg: &SimulateConfig, s: &ScenarioConfig) -> Result<String> {
    let meta = Metadata {
        version: VERSION,
        config: cfg,
        scenario: s.hypothesis.name().to_string(),
        before_shape: s.before.label(),
        after_shape: (!s.hypothesis.is_null()).then(|| s.after.label()),
    };
    Ok(serde_json::to_string_pretty(&meta)?)
}
