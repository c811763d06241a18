//! JSON reports. Every field is always present; absent estimates are `null`.

use serde::{Deserialize, Serialize};
use volbreak_core::changepoint::DatedEstimate;
use volbreak_core::cusum::Nuisance;
use volbreak_core::{DayId, PanelAnalysis, SegmentationResult, TestReport};

use crate::config::AnalysisConfig;
use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelInfo {
    pub n_days: usize,
    pub grid_size: usize,
    pub first_day: DayId,
    pub last_day: DayId,
}

impl PanelInfo {
    pub fn new(days: &[DayId], grid_size: usize) -> Self {
        PanelInfo {
            n_days: days.len(),
            grid_size,
            first_day: days[0].clone(),
            last_day: days[days.len() - 1].clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSummary {
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    /// Shape test: number of retained eigenvalues and the trace share they
    /// explain.
    pub retained_eigenvalues: Option<usize>,
    pub explained_fraction: Option<f64>,
    /// Total test: estimated long-run variance of `log Q̂_i(1)`.
    pub long_run_variance: Option<f64>,
}

impl TestSummary {
    fn new(r: &TestReport, alpha: f64) -> Self {
        let mut s = TestSummary {
            statistic: r.statistic,
            p_value: r.p_value,
            reject: r.rejects(alpha),
            retained_eigenvalues: None,
            explained_fraction: None,
            long_run_variance: None,
        };
        match &r.nuisance {
            Nuisance::Spectrum(sp) => {
                s.retained_eigenvalues = Some(sp.retained());
                s.explained_fraction = Some(sp.explained_fraction);
            }
            Nuisance::LongRunVariance(v) => s.long_run_variance = Some(*v),
            Nuisance::Components { .. } => {}
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tests {
    pub shape: TestSummary,
    pub total: TestSummary,
    pub global: TestSummary,
}

/// Change-point estimates, each reported only when its test rejects
/// (the pooled one when the global test rejects).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangePoints {
    pub shape: Option<DatedEstimate>,
    pub total: Option<DatedEstimate>,
    pub pooled: Option<DatedEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub version: String,
    pub config: AnalysisConfig,
    pub panel: PanelInfo,
    pub tests: Tests,
    pub changepoints: ChangePoints,
}

impl AnalysisReport {
    pub fn new(cfg: &AnalysisConfig, days: &[DayId], grid_size: usize, a: &PanelAnalysis) -> Result<Self> {
        let cp = a.changepoints(days)?;
        let alpha = cfg.alpha;
        Ok(AnalysisReport {
            version: VERSION.to_string(),
            config: cfg.clone(),
            panel: PanelInfo::new(days, grid_size),
            tests: Tests {
                shape: TestSummary::new(&a.shape, alpha),
                total: TestSummary::new(&a.total, alpha),
                global: TestSummary::new(&a.global, alpha),
            },
            changepoints: ChangePoints {
                shape: a.shape.rejects(alpha).then_some(cp.shape),
                total: a.total.rejects(alpha).then_some(cp.total),
                pooled: a.global.rejects(alpha).then_some(cp.pooled),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub version: String,
    pub config: AnalysisConfig,
    pub panel: PanelInfo,
    pub breaks: Vec<volbreak_core::Break>,
    pub warning: Option<String>,
}

impl SegmentReport {
    pub fn new(cfg: &AnalysisConfig, info: PanelInfo, result: SegmentationResult, warning: Option<String>) -> Self {
        SegmentReport { version: VERSION.to_string(), config: cfg.clone(), panel: info, breaks: result.breaks, warning }
    }
}
