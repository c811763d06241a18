use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use volbreak_core::{SegmentationConfig, TestConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Test,
    Segment,
    Simulate,
}

/// Settings shared by the analysis subcommands, echoed in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub mode: Mode,
    pub input: Option<PathBuf>,
    pub alpha: f64,
    pub draws: usize,
    pub series_terms: usize,
    pub eigen_threshold: f64,
    pub min_seg: usize,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let t = TestConfig::default();
        AnalysisConfig {
            mode: Mode::Test,
            input: None,
            alpha: 0.05,
            draws: t.draws,
            series_terms: t.series_terms,
            eigen_threshold: t.eigen_threshold,
            min_seg: SegmentationConfig::default().min_seg,
            seed: 0,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(CliError::Config(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if self.min_seg == 0 {
            return Err(CliError::Config("min-seg must be at least 1".into()));
        }
        self.tests().validate().map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn tests(&self) -> TestConfig {
        TestConfig { draws: self.draws, series_terms: self.series_terms, eigen_threshold: self.eigen_threshold }
    }

    pub fn segmentation(&self) -> SegmentationConfig {
        SegmentationConfig { alpha: self.alpha, min_seg: self.min_seg, tests: self.tests(), seed: self.seed }
    }
}
