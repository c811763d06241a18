//! Change-point estimators.

use serde::{Deserialize, Serialize};

use crate::cusum::statistic::{shape_objective, total_objective};
use crate::error::{Error, Result};
use crate::panel::{DayId, LogTotalQv, StdQvPanel};

/// Estimated break: `index = n*` (1-based, last day of the first regime) and
/// `theta = n*/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChangePoint {
    pub theta: f64,
    pub index: usize,
}

/// Smallest maximizer of a CUSUM objective path. `scale` is the magnitude of
/// the objective for non-degenerate data; a path that is zero up to rounding
/// counts as flat and resolves to `n = 1`.
fn argmax_path(path: &[f64], scale: f64) -> ChangePoint {
    let mut best = 0;
    for (i, &v) in path.iter().enumerate() {
        if v > path[best] {
            best = i;
        }
    }
    if path[best] <= 1e-20 * scale {
        best = 0;
    }
    ChangePoint { theta: (best + 1) as f64 / path.len() as f64, index: best + 1 }
}

fn noise_scale(data: &[f64], n: usize) -> f64 {
    n as f64 * data.iter().map(|v| v * v).sum::<f64>()
}

/// Location of a shape change: maximizer of `‖Σ_{i≤n} F̂_i − (n/N) Σ_i F̂_i‖²`.
pub fn shape_changepoint(f: &StdQvPanel) -> Result<ChangePoint> {
    let path = shape_objective(f)?;
    Ok(argmax_path(&path, noise_scale(f.as_slice(), f.n_days())))
}

/// Location of a change in total volatility (scalar CUSUM of `log Q̂_i(1)`).
pub fn total_changepoint(lq: &LogTotalQv) -> Result<ChangePoint> {
    let path = total_objective(lq)?;
    Ok(argmax_path(&path, noise_scale(lq.values(), lq.n_days())))
}

/// Pooled estimate `(p₁·θ₂ + p₂·θ₁)/(p₁ + p₂)`: the estimator whose test has
/// the smaller p-value gets the larger weight.
pub fn pooled_changepoint(theta_shape: f64, theta_total: f64, p_shape: f64, p_total: f64) -> Result<f64> {
    if !(p_shape > 0.0 && p_total > 0.0) {
        return Err(Error::invalid("pooled change point needs positive p-values"));
    }
    let w = p_shape + p_total;
    Ok((p_shape * theta_total + p_total * theta_shape) / w)
}

/// Day index `⌈θ·N⌉` (1-based, clamped to `1..=N`) for a fractional location.
pub fn theta_to_index(theta: f64, n: usize) -> usize {
    // guard against θ·N landing a hair above an integer
    let x = theta * n as f64;
    let idx = if (x - x.round()).abs() < 1e-9 { x.round() } else { x.ceil() };
    (idx as usize).clamp(1, n)
}

/// One estimator resolved to a calendar day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatedEstimate {
    pub theta: f64,
    pub index: usize,
    pub date: DayId,
}

impl DatedEstimate {
    pub fn new(theta: f64, days: &[DayId]) -> Self {
        let index = theta_to_index(theta, days.len());
        DatedEstimate { theta, index, date: days[index - 1].clone() }
    }
}

/// All three estimates for one panel, together with the p-values that
/// weight the pooled one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangePointReport {
    pub shape: DatedEstimate,
    pub total: DatedEstimate,
    pub pooled: DatedEstimate,
    pub p_shape: f64,
    pub p_total: f64,
    pub p_global: f64,
}

impl ChangePointReport {
    pub fn new(
        shape: ChangePoint,
        total: ChangePoint,
        p_shape: f64,
        p_total: f64,
        p_global: f64,
        days: &[DayId],
    ) -> Result<Self> {
        let pooled = pooled_changepoint(shape.theta, total.theta, p_shape, p_total)?;
        Ok(ChangePointReport {
            shape: DatedEstimate::new(shape.theta, days),
            total: DatedEstimate::new(total.theta, days),
            pooled: DatedEstimate::new(pooled, days),
            p_shape,
            p_total,
            p_global,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn noiseless_step_located_exactly() {
        let (a, b) = (vec![0.2, 0.5, 1.0], vec![0.4, 0.8, 1.0]);
        let mut rows = vec![a; 5];
        rows.extend(vec![b; 5]);
        let f = StdQvPanel::from_rows(rows).unwrap();
        assert_eq!(shape_changepoint(&f).unwrap(), ChangePoint { theta: 0.5, index: 5 });

        let mut v = vec![0.0; 5];
        v.extend([1.0; 5]);
        assert_eq!(total_changepoint(&LogTotalQv::from_values(v)).unwrap().index, 5);
    }

    #[test]
    fn identical_rows_resolve_to_first_day() {
        let f = StdQvPanel::from_rows(vec![vec![0.13, 0.71, 1.0]; 7]).unwrap();
        assert_eq!(shape_changepoint(&f).unwrap(), ChangePoint { theta: 1.0 / 7.0, index: 1 });
        let lq = LogTotalQv::from_values(vec![-4.1; 9]);
        assert_eq!(total_changepoint(&lq).unwrap().index, 1);
    }

    #[test]
    fn total_changepoint_location_invariant() {
        let v = vec![0.1, -0.3, 0.2, 1.1, 0.9, 1.4, 1.0, 0.8];
        let shifted: Vec<f64> = v.iter().map(|x| x - 5.0).collect();
        assert_eq!(
            total_changepoint(&LogTotalQv::from_values(v)).unwrap().index,
            total_changepoint(&LogTotalQv::from_values(shifted)).unwrap().index
        );
    }

    #[test]
    fn pooled_examples() {
        assert_eq!(pooled_changepoint(0.2, 0.6, 0.3, 0.3).unwrap(), 0.4);
        let t = pooled_changepoint(0.2, 0.6, 1e-12, 0.3).unwrap();
        assert!((t - 0.2).abs() < 1e-10);
        // single-stock reference case: 0.26 / 0.34 with p = 0.0002 / 0.0096
        let t = pooled_changepoint(0.26, 0.34, 0.0002, 0.0096).unwrap();
        assert_eq!((t * 100.0).round() / 100.0, 0.26);
        assert!(pooled_changepoint(0.2, 0.6, 0.0, 0.3).is_err());
    }

    #[test]
    fn index_from_theta() {
        assert_eq!(theta_to_index(0.5, 10), 5);
        assert_eq!(theta_to_index(0.51, 10), 6);
        assert_eq!(theta_to_index(0.3, 10), 3);
        assert_eq!(theta_to_index(0.0, 10), 1);
        assert_eq!(theta_to_index(1.0, 10), 10);
    }

    proptest! {
        #[test]
        fn pooled_between_components(t1 in 0.0f64..1.0, t2 in 0.0f64..1.0, p1 in 1e-6f64..1.0, p2 in 1e-6f64..1.0) {
            let t = pooled_changepoint(t1, t2, p1, p2).unwrap();
            prop_assert!(t >= t1.min(t2) - 1e-15 && t <= t1.max(t2) + 1e-15);
        }
    }
}
