//! Command-line definition and dispatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use volbreak_core::TestConfig;

use crate::analyze::{analyze, segment, write_objective_paths};
use crate::config::{AnalysisConfig, Mode};
use crate::error::{CliError, Result};
use crate::ingest::read_prices;
use crate::simulate::{simulate, EstimatorArg, Experiment, HypothesisArg, SimulateConfig};

#[derive(Debug, Parser)]
#[command(name = "volbreak", version, about = "Detect breaks in intraday volatility curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a price panel for a single break and estimate its location.
    Test(TestArgs),
    /// Locate multiple breaks by binary segmentation.
    Segment(SegmentArgs),
    /// Run Monte Carlo experiments or write a synthetic panel.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Draws from each simulated limiting distribution.
    #[arg(long, default_value_t = 5000)]
    pub draws: usize,
    /// Truncation of the Brownian-bridge series.
    #[arg(long = "series-j", default_value_t = 500)]
    pub series_j: usize,
    /// Share of the covariance trace retained in the shape limit.
    #[arg(long, default_value_t = 0.95)]
    pub eigen_threshold: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl LimitArgs {
    fn tests(&self) -> TestConfig {
        TestConfig { draws: self.draws, series_terms: self.series_j, eigen_threshold: self.eigen_threshold }
    }
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Wide price CSV with header `date,p0,...,pK`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write both CUSUM objective paths as CSV.
    #[arg(long)]
    pub paths: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Minimum number of days between breaks.
    #[arg(long, default_value_t = 30)]
    pub min_seg: usize,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Experiment::Size)]
    pub scenario: Experiment,
    /// Data generating process for power, estimator and panel runs.
    #[arg(long, value_enum, default_value_t = HypothesisArg::Ha1)]
    pub hypothesis: HypothesisArg,
    /// Volatility shape under the null: flat, slope, sine or ushape.
    #[arg(long, default_value = "flat")]
    pub shape: String,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 78)]
    pub k: usize,
    /// Break fraction under the alternatives.
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.10,0.05,0.01")]
    pub levels: Vec<f64>,
    /// Estimator recorded by `--scenario estimator` (default depends on the hypothesis).
    #[arg(long, value_enum)]
    pub estimator: Option<EstimatorArg>,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// CSV output path; a `<out>.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn analysis_config(mode: Mode, input: &Path, alpha: f64, min_seg: usize, l: &LimitArgs) -> AnalysisConfig {
    AnalysisConfig {
        mode,
        input: Some(input.to_path_buf()),
        alpha,
        draws: l.draws,
        series_terms: l.series_j,
        eigen_threshold: l.eigen_threshold,
        min_seg,
        seed: l.seed,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn emit_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{text}").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
        }
        None => writeln!(io::stdout().lock(), "{text}").map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Test(a) => {
            let cfg = analysis_config(Mode::Test, &a.input, a.alpha, AnalysisConfig::default().min_seg, &a.limits);
            cfg.validate()?;
            let prices = read_prices(&a.input)?;
            let report = analyze(&cfg, &prices)?;
            if let Some(path) = &a.paths {
                write_objective_paths(&prices, create(path)?)?;
            }
            emit_json(&report, a.out.as_deref())
        }
        Command::Segment(a) => {
            let cfg = analysis_config(Mode::Segment, &a.input, a.alpha, a.min_seg, &a.limits);
            cfg.validate()?;
            let prices = read_prices(&a.input)?;
            emit_json(&segment(&cfg, &prices)?, a.out.as_deref())
        }
        Command::Simulate(a) => {
            let cfg = SimulateConfig {
                experiment: a.scenario,
                hypothesis: a.hypothesis,
                shape: a.shape,
                n: a.n,
                k: a.k,
                theta: a.theta,
                reps: a.reps,
                levels: a.levels,
                estimator: a.estimator,
                seed: a.limits.seed,
                tests: a.limits.tests(),
            };
            match &a.out {
                Some(path) => {
                    let meta = simulate(&cfg, create(path)?)?;
                    let mut side = path.clone().into_os_string();
                    side.push(".meta.json");
                    std::fs::write(&side, meta + "\n").map_err(|e| CliError::io(PathBuf::from(side), e))
                }
                None => simulate(&cfg, io::stdout().lock()).map(|_| ()),
            }
        }
    }
}
