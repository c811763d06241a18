//! CUSUM statistics for the shape and total-volatility tests.

use crate::error::{Error, Result};
use crate::panel::{LogTotalQv, StdQvPanel};

fn require_days(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewDays { n, min: 2 });
    }
    Ok(())
}

/// `v[n-1] = ‖PS[n] − (n/N)·PS[N]‖²` for `n = 1..=N`, where `PS` are the
/// running row sums of a row-major `N x cols` matrix.
pub(crate) fn cusum_objective(data: &[f64], cols: usize) -> Vec<f64> {
    let n = data.len() / cols;
    let mut total = vec![0.0; cols];
    for row in data.chunks_exact(cols) {
        for (t, v) in total.iter_mut().zip(row) {
            *t += v;
        }
    }
    let mut partial = vec![0.0; cols];
    let mut out = Vec::with_capacity(n);
    for (i, row) in data.chunks_exact(cols).enumerate() {
        let frac = (i + 1) as f64 / n as f64;
        let mut acc = 0.0;
        for ((p, v), t) in partial.iter_mut().zip(row).zip(&total) {
            *p += v;
            let dev = *p - frac * t;
            acc += dev * dev;
        }
        out.push(acc);
    }
    out
}

/// CUSUM objective path of the standardized curves, one value per candidate
/// break `n = 1..=N`.
pub fn shape_objective(f: &StdQvPanel) -> Result<Vec<f64>> {
    require_days(f.n_days())?;
    Ok(cusum_objective(f.as_slice(), f.grid_size()))
}

/// Scalar CUSUM objective path of `log Q̂_i(1)`.
pub fn total_objective(lq: &LogTotalQv) -> Result<Vec<f64>> {
    require_days(lq.n_days())?;
    Ok(cusum_objective(lq.values(), 1))
}

fn normalized_sum(path: &[f64]) -> f64 {
    let n = path.len() as f64;
    path.iter().sum::<f64>() / (n * n)
}

/// Shape statistic `(1/N²) Σ_n Σ_k (PS[n,k] − (n/N)·PS[N,k])²`.
///
/// The integral over intraday time is a Riemann sum on the `K` grid points;
/// its `1/K` cancels the leading `K` of the continuous-time statistic.
pub fn shape_statistic(f: &StdQvPanel) -> Result<f64> {
    shape_objective(f).map(|p| normalized_sum(&p))
}

/// Total-volatility statistic, the scalar analogue on `log Q̂_i(1)`.
pub fn total_statistic(lq: &LogTotalQv) -> Result<f64> {
    total_objective(lq).map(|p| normalized_sum(&p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_rows_give_zero() {
        let f = StdQvPanel::from_rows(vec![vec![0.2, 0.7, 1.0]; 6]).unwrap();
        assert!(shape_statistic(&f).unwrap().abs() < 1e-28);
        let lq = LogTotalQv::from_values(vec![-3.2; 9]);
        assert!(total_statistic(&lq).unwrap().abs() < 1e-28);
    }

    #[test]
    fn two_day_hand_values() {
        let f = StdQvPanel::from_rows(vec![vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(shape_statistic(&f).unwrap(), 0.0625);
        let lq = LogTotalQv::from_values(vec![0.0, 1.0]);
        assert_eq!(total_statistic(&lq).unwrap(), 0.0625);
    }

    #[test]
    fn location_shift_invariance() {
        let lq = LogTotalQv::from_values(vec![0.3, -1.2, 0.8, 2.5, 0.1, -0.4]);
        let shifted = LogTotalQv::from_values(lq.values().iter().map(|v| v + 17.0).collect());
        let (a, b) = (total_statistic(&lq).unwrap(), total_statistic(&shifted).unwrap());
        assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn single_day_rejected() {
        let f = StdQvPanel::from_rows(vec![vec![0.5, 1.0]]).unwrap();
        assert_eq!(shape_statistic(&f).unwrap_err(), Error::TooFewDays { n: 1, min: 2 });
        assert!(total_statistic(&LogTotalQv::from_values(vec![1.0])).is_err());
    }
}
