//! Synthetic panels from the functional stochastic volatility model
//! `R_i(t) = exp(g_i) ∫₀ᵗ σ_i(u) dW_i(u)`.
//!
//! The Itô integral is simulated exactly through the time change
//! `∫₀ᵗ σ dW = W(G(t))`: increments over `[t_{k−1}, t_k]` are independent
//! `N(0, G(t_k) − G(t_{k−1}))`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use volbreak_core::{DayId, PricePanel, ReturnPanel, StreamKey};

use crate::ar::{ar1_series, switching_ar1};
use crate::error::{Result, SimError};
use crate::shape::SigmaShape;

/// Default AR(1) parameters for `g_i`.
pub const DEFAULT_PHI: f64 = 0.55;
pub const DEFAULT_SIGMA_EPS2: f64 = 0.25;
/// AR coefficients before and after the switch in the g-change scenario.
pub const GCHANGE_PHI: (f64, f64) = (0.45, 0.65);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    /// No change in `σ`.
    H0,
    /// Shape change with unchanged total volatility.
    HA1,
    /// Total-volatility change with unchanged shape.
    HA2,
    /// Simultaneous change in shape and total volatility.
    HA3,
    /// No change in `σ`; the AR coefficient of `g_i` switches mid-sample.
    GChange,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::H0 => "H0",
            Hypothesis::HA1 => "HA1",
            Hypothesis::HA2 => "HA2",
            Hypothesis::HA3 => "HA3",
            Hypothesis::GChange => "GChange",
        }
    }

    pub fn is_null(self) -> bool {
        matches!(self, Hypothesis::H0 | Hypothesis::GChange)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ArSpec {
    Constant { phi: f64, sigma_eps2: f64 },
    /// Coefficient `before` for days `1..=⌊N/2⌋`, `after` for the rest.
    Switching { before: f64, after: f64, sigma_eps2: f64 },
}

impl Default for ArSpec {
    fn default() -> Self {
        ArSpec::Constant { phi: DEFAULT_PHI, sigma_eps2: DEFAULT_SIGMA_EPS2 }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub hypothesis: Hypothesis,
    pub before: SigmaShape,
    /// Shape after the break; ignored by the null scenarios.
    pub after: SigmaShape,
    pub n: usize,
    pub k: usize,
    /// Break fraction; days `i ≤ ⌊Nθ⌋` use `before`.
    pub theta: f64,
    pub ar: ArSpec,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn null(shape: SigmaShape, n: usize, k: usize, seed: u64) -> Self {
        ScenarioConfig {
            hypothesis: Hypothesis::H0,
            after: shape.clone(),
            before: shape,
            n,
            k,
            theta: 0.5,
            ar: ArSpec::default(),
            seed,
        }
    }

    /// Null `σ` with the AR coefficient of `g_i` switching at `⌊N/2⌋`.
    pub fn g_change(shape: SigmaShape, n: usize, k: usize, seed: u64) -> Self {
        ScenarioConfig {
            hypothesis: Hypothesis::GChange,
            ar: ArSpec::Switching { before: GCHANGE_PHI.0, after: GCHANGE_PHI.1, sigma_eps2: DEFAULT_SIGMA_EPS2 },
            ..Self::null(shape, n, k, seed)
        }
    }

    /// One of the three standard alternatives, each starting from the flat shape.
    pub fn alternative(hypothesis: Hypothesis, theta: f64, n: usize, k: usize, seed: u64) -> Result<Self> {
        let after = match hypothesis {
            Hypothesis::HA1 => SigmaShape::small_sine(),
            Hypothesis::HA2 => SigmaShape::flat_high(),
            Hypothesis::HA3 => SigmaShape::u_shape_high(),
            other => {
                return Err(SimError::InvalidScenario(format!("{} is not an alternative", other.name())));
            }
        };
        Ok(ScenarioConfig {
            hypothesis,
            before: SigmaShape::flat(),
            after,
            n,
            k,
            theta,
            ar: ArSpec::default(),
            seed,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.k < 2 {
            return Err(SimError::InvalidScenario(format!("need N, K >= 2, got N = {}, K = {}", self.n, self.k)));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(SimError::InvalidScenario(format!("theta must lie in (0, 1), got {}", self.theta)));
        }
        self.before.validate()?;
        if !self.hypothesis.is_null() {
            self.after.validate()?;
        }
        Ok(())
    }

    /// Last day (1-based) of the first regime, `⌊Nθ⌋`.
    pub fn break_day(&self) -> usize {
        (self.n as f64 * self.theta).floor() as usize
    }
}

/// Exact sampler of `∫₀^{t_k} σ dW` on the grid `t_k = k/K`.
#[derive(Debug, Clone)]
pub struct GridSampler {
    sd: Vec<f64>,
}

impl GridSampler {
    pub fn new(shape: &SigmaShape, k: usize) -> Self {
        GridSampler { sd: shape.grid_variances(k).into_iter().map(f64::sqrt).collect() }
    }

    pub fn grid_size(&self) -> usize {
        self.sd.len()
    }

    /// Writes `scale · path(t_k)` for `k = 0..=K` into `out` (`out[0] = 0`).
    pub fn fill_path<R: Rng + ?Sized>(&self, scale: f64, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.sd.len() + 1);
        out[0] = 0.0;
        let mut acc = 0.0;
        for (slot, sd) in out[1..].iter_mut().zip(&self.sd) {
            let z: f64 = rng.sample(StandardNormal);
            acc += sd * z;
            *slot = scale * acc;
        }
    }
}

/// Increments `d_k ~ N(0, G(t_k) − G(t_{k−1}))` and their running sum.
pub fn ito_path<R: Rng + ?Sized>(shape: &SigmaShape, k: usize, rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
    if k < 2 {
        return Err(SimError::InvalidScenario(format!("need K >= 2, got {k}")));
    }
    let mut path = vec![0.0; k + 1];
    GridSampler::new(shape, k).fill_path(1.0, rng, &mut path);
    let increments = path.windows(2).map(|w| w[1] - w[0]).collect();
    path.remove(0);
    Ok((increments, path))
}

/// Panel for `cfg`, keyed by its own seed.
pub fn generate_panel(cfg: &ScenarioConfig) -> Result<ReturnPanel> {
    generate_panel_keyed(cfg, StreamKey::new(cfg.seed))
}

/// Panel for `cfg` drawn from the stream `key` (the seed field is ignored).
pub fn generate_panel_keyed(cfg: &ScenarioConfig, key: StreamKey) -> Result<ReturnPanel> {
    cfg.validate()?;
    let (n, k) = (cfg.n, cfg.k);
    let mut rng = key.rng();
    let g = match cfg.ar {
        ArSpec::Constant { phi, sigma_eps2 } => ar1_series(phi, sigma_eps2, n, &mut rng)?.values,
        ArSpec::Switching { before, after, sigma_eps2 } => switching_ar1(before, after, n / 2, sigma_eps2, n, &mut rng)?,
    };
    let first = GridSampler::new(&cfg.before, k);
    let second = if cfg.hypothesis.is_null() { first.clone() } else { GridSampler::new(&cfg.after, k) };
    let cut = if cfg.hypothesis.is_null() { n } else { cfg.break_day() };

    let cols = k + 1;
    let mut data = vec![0.0; n * cols];
    for (i, row) in data.chunks_exact_mut(cols).enumerate() {
        let sampler = if i < cut { &first } else { &second };
        sampler.fill_path(g[i].exp(), &mut rng, row);
    }
    Ok(ReturnPanel::from_row_major(DayId::sequence(n), cols, data)?)
}

/// Prices `open · exp(R_i(t_k))` for a simulated return panel.
pub fn price_panel(returns: &ReturnPanel, open: f64) -> Result<PricePanel> {
    if !(open > 0.0 && open.is_finite()) {
        return Err(SimError::InvalidScenario(format!("opening price must be positive, got {open}")));
    }
    let cols = returns.grid_size() + 1;
    let data = returns.rows().flat_map(|row| row.iter().map(|r| open * r.exp())).collect();
    Ok(PricePanel::from_row_major(returns.days().to_vec(), cols, data)?)
}
