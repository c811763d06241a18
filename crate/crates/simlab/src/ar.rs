//! AR(1) day-level scale factors `g_i`.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GFactorSeries {
    pub phi: f64,
    pub sigma_eps2: f64,
    pub values: Vec<f64>,
}

fn check(phi: f64, sigma_eps2: f64) -> Result<()> {
    if !(phi.abs() < 1.0) {
        return Err(SimError::InvalidScenario(format!("AR coefficient must satisfy |phi| < 1, got {phi}")));
    }
    if !(sigma_eps2 >= 0.0 && sigma_eps2.is_finite()) {
        return Err(SimError::InvalidScenario(format!("innovation variance must be finite and >= 0, got {sigma_eps2}")));
    }
    Ok(())
}

/// `g_i = φ g_{i−1} + ε_i`, started from the stationary law `N(0, σ²/(1−φ²))`.
pub fn ar1_series<R: Rng + ?Sized>(phi: f64, sigma_eps2: f64, n: usize, rng: &mut R) -> Result<GFactorSeries> {
    let values = switching_ar1(phi, phi, n, sigma_eps2, n, rng)?;
    Ok(GFactorSeries { phi, sigma_eps2, values })
}

/// AR(1) whose coefficient is `phi_before` for the first `switch_at` days and
/// `phi_after` afterwards. The recursion carries over the switch; the initial
/// draw is stationary for `phi_before`.
pub fn switching_ar1<R: Rng + ?Sized>(
    phi_before: f64,
    phi_after: f64,
    switch_at: usize,
    sigma_eps2: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check(phi_before, sigma_eps2)?;
    check(phi_after, sigma_eps2)?;
    let z = Normal::new(0.0, 1.0).expect("unit normal");
    let sd = sigma_eps2.sqrt();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    let mut g = z.sample(rng) * sd / (1.0 - phi_before * phi_before).sqrt();
    out.push(g);
    for i in 1..n {
        let phi = if i < switch_at { phi_before } else { phi_after };
        g = phi * g + sd * z.sample(rng);
        out.push(g);
    }
    Ok(out)
}
