//! Command-line front end: price CSV ingestion, JSON reports and the
//! experiment runner.

pub mod analyze;
pub mod app;
pub mod config;
pub mod error;
pub mod ingest;
pub mod report;
pub mod simulate;

pub use analyze::{analyze, segment, write_objective_paths};
pub use app::{run, Cli};
pub use config::{AnalysisConfig, Mode};
pub use error::{CliError, Result};
pub use ingest::{read_prices, read_prices_from, write_prices, write_prices_file};
pub use report::{AnalysisReport, SegmentReport};
pub use simulate::{simulate, SimulateConfig};
