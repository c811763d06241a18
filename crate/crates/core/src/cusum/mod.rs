//! The three change-point tests.
//!
//! * Shape test: CUSUM of the standardized quadratic variation curves,
//!   compared with a weighted sum of independent `∫𝔹²` whose weights are the
//!   eigenvalues of the curve covariance.
//! * Total-volatility test: CUSUM of `log Q̂_i(1)`, compared with
//!   `λ · ∫𝔹²` where `λ` is the long-run variance of that series.
//! * Global test: Fisher's combination of the two p-values, `χ²₄` under the
//!   null.

pub mod covariance;
pub mod limit;
pub mod lrv;
pub mod statistic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::{LogTotalQv, StdQvPanel};
use crate::rng::{StreamKey, SHAPE_LIMIT_STREAM, TOTAL_LIMIT_STREAM};

pub use covariance::{eigen_spectrum, fde_covariance, EigenSpectrum};
pub use limit::{
    bb_l2_draw, empirical_pvalue, pvalue_total, simulate_shape_limit, simulate_total_limit, BridgeSeries,
    LimitSample,
};
pub use lrv::longrun_variance;
pub use statistic::{shape_objective, shape_statistic, total_objective, total_statistic};

/// Tuning of the p-value machinery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    /// Draws `r` from each limiting distribution.
    pub draws: usize,
    /// Truncation `J` of the Brownian-bridge series.
    pub series_terms: usize,
    /// Share of the covariance trace the retained eigenvalues must explain.
    pub eigen_threshold: f64,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig { draws: 5000, series_terms: 500, eigen_threshold: 0.95 }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::invalid("number of limit draws must be at least 1"));
        }
        if self.series_terms == 0 {
            return Err(Error::invalid("series truncation must be at least 1"));
        }
        if !(self.eigen_threshold > 0.0 && self.eigen_threshold <= 1.0) {
            return Err(Error::invalid(format!(
                "eigen threshold must lie in (0, 1], got {}",
                self.eigen_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Shape,
    Total,
    Global,
}

/// Estimated nuisance quantities behind a p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nuisance {
    Spectrum(EigenSpectrum),
    LongRunVariance(f64),
    Components { shape_p: f64, total_p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub kind: TestKind,
    pub statistic: f64,
    pub p_value: f64,
    pub nuisance: Nuisance,
}

impl TestReport {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value <= alpha
    }
}

/// Survival function of `χ²₄`: `exp(−x/2)(1 + x/2)`.
pub fn chi2_4_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    (-x / 2.0).exp() * (1.0 + x / 2.0)
}

/// Fisher's combination `−2(log p₁ + log p₂)` with its `χ²₄` p-value.
pub fn fisher_combine(shape_p: f64, total_p: f64) -> Result<TestReport> {
    for p in [shape_p, total_p] {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid(format!("p-values must lie in (0, 1], got {p}")));
        }
    }
    let statistic = (-2.0 * (shape_p.ln() + total_p.ln())).max(0.0);
    Ok(TestReport {
        kind: TestKind::Global,
        statistic,
        p_value: chi2_4_survival(statistic),
        nuisance: Nuisance::Components { shape_p, total_p },
    })
}

/// Shape test on the standardized curves.
pub fn shape_test(f: &StdQvPanel, cfg: &TestConfig, key: StreamKey) -> Result<TestReport> {
    cfg.validate()?;
    let statistic = shape_statistic(f)?;
    let cov = fde_covariance(f)?;
    let spectrum = eigen_spectrum(&cov, cfg.eigen_threshold)?;
    let sample = simulate_shape_limit(&spectrum, cfg.draws, cfg.series_terms, key.child(SHAPE_LIMIT_STREAM))?;
    Ok(TestReport {
        kind: TestKind::Shape,
        statistic,
        p_value: empirical_pvalue(statistic, &sample),
        nuisance: Nuisance::Spectrum(spectrum),
    })
}

/// Total-volatility test on `log Q̂_i(1)`.
pub fn total_test(lq: &LogTotalQv, cfg: &TestConfig, key: StreamKey) -> Result<TestReport> {
    cfg.validate()?;
    let statistic = total_statistic(lq)?;
    let lrv = longrun_variance(lq.values())?;
    let p_value = pvalue_total(statistic, lrv, cfg.draws, cfg.series_terms, key.child(TOTAL_LIMIT_STREAM))?;
    Ok(TestReport { kind: TestKind::Total, statistic, p_value, nuisance: Nuisance::LongRunVariance(lrv) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn fisher_examples() {
        let r = fisher_combine(1.0, 1.0).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);

        let r = fisher_combine(E.recip(), E.recip()).unwrap();
        assert!((r.statistic - 4.0).abs() < 1e-14);
        assert!((r.p_value - 3.0 * E.powi(-2)).abs() < 1e-12);
        assert!((r.p_value - 0.40601).abs() < 1e-5);
    }

    #[test]
    fn fisher_is_symmetric() {
        for (a, b) in [(0.3, 0.001), (1e-9, 0.77), (0.5, 0.5000001)] {
            assert_eq!(fisher_combine(a, b).unwrap().statistic, fisher_combine(b, a).unwrap().statistic);
            assert_eq!(fisher_combine(a, b).unwrap().p_value, fisher_combine(b, a).unwrap().p_value);
        }
    }

    #[test]
    fn fisher_rejects_zero_p() {
        assert!(fisher_combine(0.0, 0.5).is_err());
        assert!(fisher_combine(0.5, 1.5).is_err());
    }

    #[test]
    fn chi2_survival_matches_statrs() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let chi = ChiSquared::new(4.0).unwrap();
        for x in [0.1, 1.0, 4.0, 9.4877, 13.2767, 30.0] {
            assert!((chi2_4_survival(x) - chi.sf(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(TestConfig::default().validate().is_ok());
        assert!(TestConfig { draws: 0, ..Default::default() }.validate().is_err());
        assert!(TestConfig { eigen_threshold: 0.0, ..Default::default() }.validate().is_err());
    }
}
