//! The `test` and `segment` subcommands.

use std::io::Write;

use volbreak_core::cusum::{shape_objective, total_objective};
use volbreak_core::{
    analyze_returns, binary_segmentation, cidr_curves, log_total_qv, realized_qv, standardized_qv, PricePanel,
    StreamKey,
};

use crate::config::AnalysisConfig;
use crate::error::{CliError, Result};
use crate::report::{AnalysisReport, PanelInfo, SegmentReport};

/// Runs the three tests and the estimators on a price panel.
pub fn analyze(cfg: &AnalysisConfig, prices: &PricePanel) -> Result<AnalysisReport> {
    cfg.validate()?;
    let returns = cidr_curves(prices)?;
    let a = analyze_returns(&returns, &cfg.tests(), StreamKey::new(cfg.seed))?;
    AnalysisReport::new(cfg, prices.days(), prices.grid_size(), &a)
}

/// Binary segmentation of a price panel.
pub fn segment(cfg: &AnalysisConfig, prices: &PricePanel) -> Result<SegmentReport> {
    cfg.validate()?;
    let n = prices.n_days();
    let warning = (n < 2 * cfg.min_seg).then(|| {
        let msg = format!("min-seg {} exceeds half of the {n} days; no segment can be split", cfg.min_seg);
        log::warn!("{msg}");
        msg
    });
    let result = binary_segmentation(prices, &cfg.segmentation())?;
    Ok(SegmentReport::new(cfg, PanelInfo::new(prices.days(), prices.grid_size()), result, warning))
}

/// Tidy CSV of both CUSUM objective paths:
/// `index,date,theta,shape_objective,total_objective`.
pub fn write_objective_paths<W: Write>(prices: &PricePanel, writer: W) -> Result<()> {
    let qv = realized_qv(&cidr_curves(prices)?)?;
    let shape = shape_objective(&standardized_qv(&qv)?)?;
    let total = total_objective(&log_total_qv(&qv)?)?;
    let n = prices.n_days();
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["index", "date", "theta", "shape_objective", "total_objective"])?;
    for (i, day) in prices.days().iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            day.to_string(),
            ((i + 1) as f64 / n as f64).to_string(),
            shape[i].to_string(),
            total[i].to_string(),
        ])?;
    }
    w.flush().map_err(|e| CliError::io("<paths>", e))?;
    Ok(())
}
