//! End-to-end analysis of one panel.

use serde::{Deserialize, Serialize};

use crate::changepoint::{pooled_changepoint, shape_changepoint, total_changepoint, ChangePoint, ChangePointReport};
use crate::cusum::{fisher_combine, shape_test, total_test, TestConfig, TestReport};
use crate::error::{Error, Result};
use crate::panel::{LogTotalQv, ReturnPanel, StdQvPanel};
use crate::qv::{log_total_qv, realized_qv, standardized_qv};
use crate::rng::StreamKey;

/// Tests and raw change-point estimates for a panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelAnalysis {
    pub shape: TestReport,
    pub total: TestReport,
    pub global: TestReport,
    pub shape_cp: ChangePoint,
    pub total_cp: ChangePoint,
    /// Pooled fractional location.
    pub pooled_theta: f64,
}

impl PanelAnalysis {
    pub fn changepoints(&self, days: &[crate::panel::DayId]) -> Result<ChangePointReport> {
        ChangePointReport::new(
            self.shape_cp,
            self.total_cp,
            self.shape.p_value,
            self.total.p_value,
            self.global.p_value,
            days,
        )
    }
}

/// Runs the three tests and the estimators on precomputed curves.
pub fn analyze_curves(f: &StdQvPanel, lq: &LogTotalQv, cfg: &TestConfig, key: StreamKey) -> Result<PanelAnalysis> {
    if f.n_days() != lq.n_days() {
        return Err(Error::invalid("shape and total inputs cover different days"));
    }
    let shape = shape_test(f, cfg, key)?;
    let total = total_test(lq, cfg, key)?;
    let global = fisher_combine(shape.p_value, total.p_value)?;
    let shape_cp = shape_changepoint(f)?;
    let total_cp = total_changepoint(lq)?;
    let pooled_theta = pooled_changepoint(shape_cp.theta, total_cp.theta, shape.p_value, total.p_value)?;
    Ok(PanelAnalysis { shape, total, global, shape_cp, total_cp, pooled_theta })
}

/// Runs the full pipeline from cumulative intraday returns.
pub fn analyze_returns(returns: &ReturnPanel, cfg: &TestConfig, key: StreamKey) -> Result<PanelAnalysis> {
    let qv = realized_qv(returns)?;
    let f = standardized_qv(&qv)?;
    let lq = log_total_qv(&qv)?;
    analyze_curves(&f, &lq, cfg, key)
}
