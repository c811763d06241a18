//! Binary segmentation with the global test and the pooled estimator.
//!
//! A segment is tested; if the global p-value is at most `alpha`, the pooled
//! estimate splits it and both halves are processed in turn. Segments
//! shorter than `2 * min_seg` days are not tested. P-values are raw
//! per-segment values, without multiplicity adjustment.

use serde::{Deserialize, Serialize};

use crate::changepoint::theta_to_index;
use crate::cusum::lrv::MIN_LRV_LEN;
use crate::cusum::TestConfig;
use crate::error::{Error, Result};
use crate::panel::{DayId, LogTotalQv, PricePanel, ReturnPanel, StdQvPanel};
use crate::pipeline::analyze_curves;
use crate::qv::{cidr_curves, log_total_qv, realized_qv, standardized_qv};
use crate::rng::StreamKey;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentationConfig {
    pub alpha: f64,
    /// Minimum number of days between breaks (and between a break and either
    /// end of the sample).
    pub min_seg: usize,
    pub tests: TestConfig,
    pub seed: u64,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        SegmentationConfig { alpha: 0.05, min_seg: 30, tests: TestConfig::default(), seed: 0 }
    }
}

/// A detected break. `index` is the 1-based position of the last day of the
/// earlier regime within the full panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Break {
    pub index: usize,
    pub date: DayId,
    pub p_value: f64,
    /// First and last (1-based, inclusive) day of the segment that was split.
    pub segment: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationResult {
    pub breaks: Vec<Break>,
    pub alpha: f64,
    pub min_seg: usize,
}

/// Binary segmentation of a price panel.
pub fn binary_segmentation(prices: &PricePanel, cfg: &SegmentationConfig) -> Result<SegmentationResult> {
    segment_returns(&cidr_curves(prices)?, cfg)
}

/// Binary segmentation starting from cumulative returns.
pub fn segment_returns(returns: &ReturnPanel, cfg: &SegmentationConfig) -> Result<SegmentationResult> {
    if !(cfg.alpha > 0.0 && cfg.alpha <= 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1], got {}", cfg.alpha)));
    }
    if cfg.min_seg == 0 {
        return Err(Error::invalid("min_seg must be at least 1"));
    }
    cfg.tests.validate()?;
    let qv = realized_qv(returns)?;
    let f = standardized_qv(&qv)?;
    let lq = log_total_qv(&qv)?;

    let mut breaks = Vec::new();
    let root = StreamKey::new(cfg.seed);
    let mut stack = vec![(0usize, returns.n_days())];
    while let Some((start, end)) = stack.pop() {
        if let Some(b) = split(&f, &lq, start, end, cfg, root)? {
            let cut = b.index;
            breaks.push(b);
            stack.push((cut, end));
            stack.push((start, cut));
        }
    }
    breaks.sort_by_key(|b| b.index);
    Ok(SegmentationResult { breaks, alpha: cfg.alpha, min_seg: cfg.min_seg })
}

fn split(
    f: &StdQvPanel,
    lq: &LogTotalQv,
    start: usize,
    end: usize,
    cfg: &SegmentationConfig,
    root: StreamKey,
) -> Result<Option<Break>> {
    let len = end - start;
    if len < 2 * cfg.min_seg || len < MIN_LRV_LEN {
        return Ok(None);
    }
    let key = root.child(start as u64).child(end as u64);
    let analysis = analyze_curves(&f.slice(start..end), &lq.slice(start..end), &cfg.tests, key)?;
    if !analysis.global.rejects(cfg.alpha) {
        return Ok(None);
    }
    // keep both children at least min_seg days long
    let local = theta_to_index(analysis.pooled_theta, len).clamp(cfg.min_seg, len - cfg.min_seg);
    let index = start + local;
    Ok(Some(Break {
        index,
        date: f.days()[index - 1].clone(),
        p_value: analysis.global.p_value,
        segment: (start + 1, end),
    }))
}
