//! First-order difference estimator of the curve covariance and its
//! eigen-decomposition.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::StdQvPanel;

/// Covariance of the standardized curves on the `K` grid points, estimated
/// from consecutive-day differences:
///
/// ```text
/// C = 1/(2(N−1)) · Σ_{n=2..N} (F_n − F_{n−1})(F_n − F_{n−1})ᵀ
/// ```
///
/// Differencing removes a single mean shift, so the estimate stays valid
/// under the alternative. The matrix eigenvalues are the operator
/// eigenvalues that weight the Brownian-bridge mixture of the shape test's
/// limit, because the statistic itself sums over grid points.
pub fn fde_covariance(f: &StdQvPanel) -> Result<DMatrix<f64>> {
    let n = f.n_days();
    if n < 2 {
        return Err(Error::TooFewDays { n, min: 2 });
    }
    let k = f.grid_size();
    let mut upper = vec![0.0; k * k];
    let mut diff = vec![0.0; k];
    for i in 1..n {
        for ((d, a), b) in diff.iter_mut().zip(f.row(i)).zip(f.row(i - 1)) {
            *d = a - b;
        }
        for r in 0..k {
            let dr = diff[r];
            if dr == 0.0 {
                continue;
            }
            let row = &mut upper[r * k..(r + 1) * k];
            for c in r..k {
                row[c] += dr * diff[c];
            }
        }
    }
    let scale = 1.0 / (2.0 * (n - 1) as f64);
    Ok(DMatrix::from_fn(k, k, |r, c| {
        let (lo, hi) = if r <= c { (r, c) } else { (c, r) };
        upper[lo * k + hi] * scale
    }))
}

/// Leading eigenvalues of a covariance estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSpectrum {
    /// Retained eigenvalues, decreasing and nonnegative.
    pub eigenvalues: Vec<f64>,
    /// Share of the trace carried by the retained eigenvalues.
    pub explained_fraction: f64,
    pub trace: f64,
}

impl EigenSpectrum {
    /// Number of retained components `B`.
    pub fn retained(&self) -> usize {
        self.eigenvalues.len()
    }
}

const ASYMMETRY_TOL: f64 = 1e-10;

/// Keeps the smallest number `B` of leading eigenvalues whose sum reaches
/// `threshold` of the trace.
pub fn eigen_spectrum(cov: &DMatrix<f64>, threshold: f64) -> Result<EigenSpectrum> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::invalid(format!("eigen threshold must lie in (0, 1], got {threshold}")));
    }
    if !cov.is_square() || cov.nrows() == 0 {
        return Err(Error::invalid("covariance must be a non-empty square matrix"));
    }
    let scale = cov.amax().max(1.0);
    let asym = (cov - cov.transpose()).amax();
    if asym > ASYMMETRY_TOL * scale {
        return Err(Error::AsymmetricCovariance(asym));
    }
    let trace = cov.trace();
    if !(trace > 0.0) {
        return Err(Error::DegenerateCovariance);
    }

    let mut eig: Vec<f64> = cov.clone().symmetric_eigenvalues().iter().map(|&v| v.max(0.0)).collect();
    eig.sort_by(|a, b| b.total_cmp(a));

    // Relative slack so that e.g. 19 equal eigenvalues out of 20 count as 95%.
    let target = threshold * trace * (1.0 - 1e-12);
    let mut cum = 0.0;
    let mut keep = eig.len();
    for (i, v) in eig.iter().enumerate() {
        cum += v;
        if cum >= target {
            keep = i + 1;
            break;
        }
    }
    eig.truncate(keep);
    let explained = (eig.iter().sum::<f64>() / trace).min(1.0);
    Ok(EigenSpectrum { eigenvalues: eig, explained_fraction: explained, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel(rows: Vec<Vec<f64>>) -> StdQvPanel {
        StdQvPanel::from_rows(rows).unwrap()
    }

    #[test]
    fn identical_rows_zero_matrix() {
        let c = fde_covariance(&panel(vec![vec![0.3, 0.6, 1.0]; 5])).unwrap();
        assert_eq!(c.amax(), 0.0);
        assert_eq!(eigen_spectrum(&c, 0.95).unwrap_err(), Error::DegenerateCovariance);
    }

    #[test]
    fn two_days_rank_one() {
        let (a, b) = (vec![0.1, 0.5, 0.9, 1.0], vec![0.3, 0.4, 0.6, 1.0]);
        let d: Vec<f64> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        let c = fde_covariance(&panel(vec![a, b])).unwrap();
        for r in 0..4 {
            for s in 0..4 {
                assert!((c[(r, s)] - d[r] * d[s] / 2.0).abs() < 1e-16);
            }
        }
        let sp = eigen_spectrum(&c, 0.95).unwrap();
        let norm2: f64 = d.iter().map(|x| x * x).sum();
        assert_eq!(sp.retained(), 1);
        assert!((sp.eigenvalues[0] - norm2 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn reversed_rows_same_estimate() {
        let rows = vec![
            vec![0.1, 0.4, 1.0],
            vec![0.3, 0.5, 1.0],
            vec![0.2, 0.9, 1.0],
            vec![0.05, 0.2, 1.0],
        ];
        let mut rev = rows.clone();
        rev.reverse();
        assert_eq!(fde_covariance(&panel(rows)).unwrap(), fde_covariance(&panel(rev)).unwrap());
    }

    #[test]
    fn equal_eigenvalues_keep_ceil_fraction() {
        for k in [2usize, 5, 20, 26, 78] {
            let sp = eigen_spectrum(&DMatrix::identity(k, k), 0.95).unwrap();
            assert_eq!(sp.retained(), (0.95 * k as f64).ceil() as usize, "k = {k}");
        }
    }

    #[test]
    fn diag_nine_one_keeps_both() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![9.0, 1.0]));
        let sp = eigen_spectrum(&m, 0.95).unwrap();
        assert_eq!(sp.eigenvalues, vec![9.0, 1.0]);
        let sp = eigen_spectrum(&m, 0.9).unwrap();
        assert_eq!(sp.eigenvalues, vec![9.0]);
    }

    #[test]
    fn asymmetric_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(eigen_spectrum(&m, 0.95), Err(Error::AsymmetricCovariance(_))));
        assert!(eigen_spectrum(&DMatrix::identity(2, 2), 1.5).is_err());
    }
}
