//! Detection of structural breaks in the intraday volatility pattern of a
//! panel of daily price curves.
//!
//! The pipeline runs in three stages:
//!
//! 1. [`qv`] turns prices into cumulative intraday returns, realized
//!    quadratic variation curves, their standardized (cdf-like) versions and
//!    the log total quadratic variation of each day.
//! 2. [`cusum`] computes the shape test, the total-volatility test and the
//!    Fisher-combined global test, with p-values from simulated limiting
//!    distributions.
//! 3. [`changepoint`] locates breaks, and [`segmentation`] applies binary
//!    segmentation for multiple breaks.
//!
//! [`pipeline`] wires the stages together for a single panel.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod changepoint;
pub mod cusum;
pub mod error;
pub mod panel;
pub mod pipeline;
pub mod qv;
pub mod rng;
pub mod segmentation;

pub use changepoint::{pooled_changepoint, shape_changepoint, total_changepoint, ChangePoint, ChangePointReport};
pub use cusum::{TestConfig, TestKind, TestReport};
pub use error::{Error, Result};
pub use panel::{DayId, LogTotalQv, PricePanel, QvPanel, ReturnPanel, StdQvPanel};
pub use pipeline::{analyze_curves, analyze_returns, PanelAnalysis};
pub use qv::{cidr_curves, log_total_qv, realized_qv, standardized_qv};
pub use rng::StreamKey;
pub use segmentation::{binary_segmentation, Break, SegmentationConfig, SegmentationResult};
