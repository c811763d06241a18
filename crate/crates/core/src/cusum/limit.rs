//! Simulation of the limiting null distributions and empirical p-values.
//!
//! Both limits are built from `∫₀¹ 𝔹²(u) du` for a standard Brownian bridge
//! `𝔹`, drawn through its Karhunen–Loève expansion
//!
//! ```text
//! ∫₀¹ 𝔹²(u) du = Σ_{j≥1} Z_j² / (j²π²),   Z_j i.i.d. N(0, 1)
//! ```
//!
//! truncated at `J` terms (truncation bias `Σ_{j>J} 1/(j²π²) < 1/(π²J)`).

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::covariance::EigenSpectrum;
use crate::error::{Error, Result};
use crate::rng::StreamKey;

/// Draws per independently keyed chunk when simulating a limit sample.
/// Fixed so that the output does not depend on the number of threads.
const CHUNK: usize = 256;

/// Truncated series weights `1/(j²π²)`, `j = 1..=J`.
#[derive(Debug, Clone)]
pub struct BridgeSeries {
    weights: Vec<f64>,
}

impl BridgeSeries {
    pub fn new(terms: usize) -> Result<Self> {
        if terms == 0 {
            return Err(Error::invalid("series truncation J must be at least 1"));
        }
        let weights = (1..=terms).map(|j| 1.0 / ((j * j) as f64 * PI * PI)).collect();
        Ok(BridgeSeries { weights })
    }

    pub fn terms(&self) -> usize {
        self.weights.len()
    }

    /// One draw of the truncated `∫𝔹²` series.
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut acc = 0.0;
        for w in &self.weights {
            let z: f64 = rng.sample(StandardNormal);
            acc += w * z * z;
        }
        acc
    }
}

/// One draw of `Σ_{j≤J} Z_j²/(j²π²)`.
pub fn bb_l2_draw<R: Rng + ?Sized>(terms: usize, rng: &mut R) -> f64 {
    let mut acc = 0.0;
    for j in 1..=terms {
        let z: f64 = rng.sample(StandardNormal);
        acc += z * z / ((j * j) as f64 * PI * PI);
    }
    acc
}

/// Draws from a limiting null distribution, sorted in decreasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSample {
    values: Vec<f64>,
    series_terms: usize,
}

impl LimitSample {
    pub fn from_draws(mut values: Vec<f64>, series_terms: usize) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        LimitSample { values, series_terms }
    }

    /// Decreasing draws.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn series_terms(&self) -> usize {
        self.series_terms
    }

    /// Number of draws `>= stat`.
    pub fn exceedances(&self, stat: f64) -> usize {
        self.values.partition_point(|&v| v >= stat)
    }
}

fn simulate<F>(draws: usize, key: StreamKey, draw: F) -> Vec<f64>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> f64 + Sync,
{
    let chunks = draws.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = key.child(c as u64).rng();
            let len = CHUNK.min(draws - c * CHUNK);
            (0..len).map(|_| draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

/// `r` draws of `Σ_{ℓ≤B} λ_ℓ ∫𝔹_ℓ²` with independent bridges.
pub fn simulate_shape_limit(spectrum: &EigenSpectrum, draws: usize, terms: usize, key: StreamKey) -> Result<LimitSample> {
    if draws == 0 {
        return Err(Error::invalid("limit sample needs at least one draw"));
    }
    let series = BridgeSeries::new(terms)?;
    let lambdas = &spectrum.eigenvalues;
    let values = simulate(draws, key, |rng| lambdas.iter().map(|l| l * series.draw(rng)).sum());
    Ok(LimitSample::from_draws(values, terms))
}

/// `r` draws of `lrv · ∫𝔹²`.
pub fn simulate_total_limit(lrv: f64, draws: usize, terms: usize, key: StreamKey) -> Result<LimitSample> {
    if draws == 0 {
        return Err(Error::invalid("limit sample needs at least one draw"));
    }
    if !(lrv >= 0.0) {
        return Err(Error::invalid(format!("long-run variance must be nonnegative, got {lrv}")));
    }
    let series = BridgeSeries::new(terms)?;
    let values = simulate(draws, key, |rng| lrv * series.draw(rng));
    Ok(LimitSample::from_draws(values, terms))
}

/// Add-one exceedance p-value `(1 + #{draws ≥ stat}) / (r + 1)`, always in
/// `(0, 1]`.
pub fn empirical_pvalue(stat: f64, sample: &LimitSample) -> f64 {
    (1 + sample.exceedances(stat)) as f64 / (sample.len() + 1) as f64
}

/// P-value of the total-volatility statistic against `lrv · ∫𝔹²`.
pub fn pvalue_total(stat: f64, lrv: f64, draws: usize, terms: usize, key: StreamKey) -> Result<f64> {
    if draws == 0 {
        return Err(Error::invalid("limit sample needs at least one draw"));
    }
    if lrv == 0.0 {
        // the limit is a point mass at zero
        return Ok(if stat > 0.0 { 1.0 / (draws + 1) as f64 } else { 1.0 });
    }
    let sample = simulate_total_limit(lrv, draws, terms, key)?;
    Ok(empirical_pvalue(stat, &sample))
}
