//! Long-run variance of a scalar series: AR(1) prewhitening, Bartlett-kernel
//! HAC on the residuals with Newey–West (1994) automatic bandwidth, then
//! recoloring.

use log::warn;

use crate::error::{Error, Result};

/// Largest absolute AR(1) coefficient used for prewhitening.
pub const PREWHITEN_CLAMP: f64 = 0.97;

/// Minimum series length accepted by [`longrun_variance`].
pub const MIN_LRV_LEN: usize = 10;

/// Autocovariance at lag `h` with the `1/n` normalization.
fn autocov(x: &[f64], h: usize) -> f64 {
    let n = x.len();
    x[..n - h].iter().zip(&x[h..]).map(|(a, b)| a * b).sum::<f64>() / n as f64
}

/// Newey–West (1994) plug-in bandwidth for the Bartlett kernel.
///
/// Pilot lag `q = ⌊4 (n/100)^{2/9}⌋`, then
/// `S = 1.1447 · (α̂ n)^{1/3}` with `α̂ = (s₁/s₀)²`,
/// `s₀ = γ₀ + 2Σ_{j≤q} γ_j` and `s₁ = 2Σ_{j≤q} j γ_j`.
pub fn newey_west_bandwidth(resid: &[f64]) -> f64 {
    let n = resid.len();
    let q = ((4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize).min(n - 1);
    let mut s0 = autocov(resid, 0);
    let mut s1 = 0.0;
    for j in 1..=q {
        let g = autocov(resid, j);
        s0 += 2.0 * g;
        s1 += 2.0 * j as f64 * g;
    }
    if !(s0 > 0.0) {
        return 0.0;
    }
    let alpha = (s1 / s0).powi(2);
    1.1447 * (alpha * n as f64).cbrt()
}

/// Bartlett-kernel HAC estimate `γ₀ + 2 Σ_{h<S} (1 − h/S) γ_h`.
pub fn bartlett_hac(x: &[f64], bandwidth: f64) -> f64 {
    let mut acc = autocov(x, 0);
    let mut h = 1;
    while (h as f64) < bandwidth && h < x.len() {
        acc += 2.0 * (1.0 - h as f64 / bandwidth) * autocov(x, h);
        h += 1;
    }
    acc
}

/// Long-run variance `Σ_h Cov(x_0, x_h)` of a (weakly stationary) series.
///
/// Returns 0 for a constant series.
pub fn longrun_variance(series: &[f64]) -> Result<f64> {
    let n = series.len();
    if n < MIN_LRV_LEN {
        return Err(Error::TooFewDays { n, min: MIN_LRV_LEN });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("long-run variance of a non-finite series"));
    }
    let first = series[0];
    if series.iter().all(|&v| v == first) {
        return Ok(0.0);
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = series.iter().map(|v| v - mean).collect();

    let g0 = autocov(&x, 0);
    if !(g0 > 0.0) {
        return Ok(0.0);
    }
    let b = (autocov(&x, 1) / g0).clamp(-PREWHITEN_CLAMP, PREWHITEN_CLAMP);
    let resid: Vec<f64> = x.windows(2).map(|w| w[1] - b * w[0]).collect();

    let bandwidth = newey_west_bandwidth(&resid);
    let lrv = bartlett_hac(&resid, bandwidth) / ((1.0 - b) * (1.0 - b));
    if lrv < 0.0 {
        warn!("negative long-run variance estimate {lrv:e} clamped to 0");
        return Ok(0.0);
    }
    Ok(lrv)
}
