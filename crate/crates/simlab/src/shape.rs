//! Intraday volatility shapes `σ(u)` and their time-change clocks
//! `G(t) = ∫₀ᵗ σ²(u) du`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SimError};

/// Points (plus the endpoint) on which positivity of `σ` is checked.
const POSITIVITY_GRID: usize = 1000;
const QUADRATURE_TOL: f64 = 1e-12;

pub type ShapeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied volatility function, integrated numerically.
#[derive(Clone)]
pub struct CustomShape {
    pub name: String,
    pub sigma: ShapeFn,
}

impl fmt::Debug for CustomShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomShape").field("name", &self.name).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum SigmaShape {
    /// `σ(u) = level`.
    Flat { level: f64 },
    /// `σ(u) = intercept + slope·u`.
    Slope { intercept: f64, slope: f64 },
    /// `σ(u) = amplitude·sin(2πu) + offset`.
    Sine { amplitude: f64, offset: f64 },
    /// `σ(u) = (u − 0.5)² + offset`.
    UShape { offset: f64 },
    Custom(CustomShape),
}

impl SigmaShape {
    pub fn flat() -> Self {
        SigmaShape::Flat { level: 0.2 }
    }

    pub fn slope() -> Self {
        SigmaShape::Slope { intercept: 0.1, slope: 0.2 }
    }

    pub fn sine() -> Self {
        SigmaShape::Sine { amplitude: 0.1, offset: 0.2 }
    }

    pub fn u_shape() -> Self {
        SigmaShape::UShape { offset: 0.1145299 }
    }

    /// Small sine perturbation of the flat shape with the same total
    /// volatility 0.04 (pure shape change).
    pub fn small_sine() -> Self {
        SigmaShape::Sine { amplitude: 0.02, offset: (199.0f64 / 5000.0).sqrt() }
    }

    /// Flat shape shifted up to 0.4 (pure total-volatility change).
    pub fn flat_high() -> Self {
        SigmaShape::Flat { level: 0.4 }
    }

    /// U-shape with total volatility 0.1525 (shape and level change).
    pub fn u_shape_high() -> Self {
        SigmaShape::UShape { offset: 0.3 }
    }

    pub fn custom(name: impl Into<String>, sigma: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SigmaShape::Custom(CustomShape { name: name.into(), sigma: Arc::new(sigma) })
    }

    /// Parses the four named shapes (`flat`, `slope`, `sine`, `ushape`).
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "flat" => Some(Self::flat()),
            "slope" => Some(Self::slope()),
            "sine" => Some(Self::sine()),
            "ushape" => Some(Self::u_shape()),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SigmaShape::Flat { level } => format!("flat({level})"),
            SigmaShape::Slope { intercept, slope } => format!("slope({intercept},{slope})"),
            SigmaShape::Sine { amplitude, offset } => format!("sine({amplitude},{offset:.6})"),
            SigmaShape::UShape { offset } => format!("ushape({offset})"),
            SigmaShape::Custom(c) => c.name.clone(),
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            SigmaShape::Flat { level } => *level,
            SigmaShape::Slope { intercept, slope } => intercept + slope * u,
            SigmaShape::Sine { amplitude, offset } => amplitude * (2.0 * PI * u).sin() + offset,
            SigmaShape::UShape { offset } => (u - 0.5).powi(2) + offset,
            SigmaShape::Custom(c) => (c.sigma)(u),
        }
    }

    /// Checks `σ(u) > 0` on a 1000-interval grid of `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        for i in 0..=POSITIVITY_GRID {
            let u = i as f64 / POSITIVITY_GRID as f64;
            let s = self.eval(u);
            if !(s > 0.0) || !s.is_finite() {
                return Err(SimError::InvalidShape(format!("{}: σ({u}) = {s} is not positive", self.label())));
            }
        }
        Ok(())
    }

    /// `G(t) = ∫₀ᵗ σ²(u) du`; closed form for the parametric shapes,
    /// adaptive Simpson quadrature for custom ones.
    pub fn integral(&self, t: f64) -> f64 {
        match self {
            SigmaShape::Flat { level } => level * level * t,
            SigmaShape::Slope { intercept: a, slope: b } => a * a * t + a * b * t * t + b * b * t.powi(3) / 3.0,
            SigmaShape::Sine { amplitude: a, offset: c } => {
                a * a * (t / 2.0 - (4.0 * PI * t).sin() / (8.0 * PI))
                    + 2.0 * a * c * (1.0 - (2.0 * PI * t).cos()) / (2.0 * PI)
                    + c * c * t
            }
            SigmaShape::UShape { offset: c } => {
                let anti = |v: f64| v.powi(5) / 5.0 + 2.0 * c * v.powi(3) / 3.0 + c * c * v;
                anti(t - 0.5) - anti(-0.5)
            }
            SigmaShape::Custom(cs) => {
                let f = |u: f64| {
                    let s = (cs.sigma)(u);
                    s * s
                };
                adaptive_simpson(&f, 0.0, t, QUADRATURE_TOL)
            }
        }
    }

    /// Total volatility `G(1)`.
    pub fn total(&self) -> f64 {
        self.integral(1.0)
    }

    /// Increment variances `G(k/K) − G((k−1)/K)`, `k = 1..=K`.
    pub fn grid_variances(&self, k: usize) -> Vec<f64> {
        let clock: Vec<f64> = (0..=k).map(|i| self.integral(i as f64 / k as f64)).collect();
        clock.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_totals() {
        assert!((SigmaShape::flat().total() - 0.04).abs() < 1e-15);
        assert!((SigmaShape::flat().integral(0.3) - 0.012).abs() < 1e-15);
        assert!((SigmaShape::slope().total() - (0.01 + 0.02 + 0.04 / 3.0)).abs() < 1e-15);
        assert!((SigmaShape::sine().total() - 0.045).abs() < 1e-15);
        assert!((SigmaShape::small_sine().total() - 0.04).abs() < 1e-15);
        assert!((SigmaShape::flat_high().total() - 0.16).abs() < 1e-15);
        assert!((SigmaShape::u_shape_high().total() - 0.1525).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for shape in [
            SigmaShape::flat(),
            SigmaShape::slope(),
            SigmaShape::sine(),
            SigmaShape::u_shape(),
            SigmaShape::small_sine(),
            SigmaShape::u_shape_high(),
        ] {
            let f = |u: f64| shape.eval(u).powi(2);
            for t in [0.0, 0.1, 0.37, 0.5, 0.81, 1.0] {
                let q = adaptive_simpson(&f, 0.0, t, 1e-13);
                assert!((shape.integral(t) - q).abs() < 1e-12, "{} at {t}", shape.label());
            }
        }
    }

    #[test]
    fn custom_shape_uses_quadrature() {
        let s = SigmaShape::custom("exp", |u: f64| (0.5 * u).exp() * 0.1);
        // ∫ 0.01 e^{u} du = 0.01 (e − 1)
        assert!((s.total() - 0.01 * (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn grid_variances_telescope() {
        let s = SigmaShape::u_shape();
        let v = s.grid_variances(78);
        assert_eq!(v.len(), 78);
        assert!(v.iter().all(|&x| x > 0.0));
        assert!((v.iter().sum::<f64>() - s.total()).abs() < 1e-15);
        let flat = SigmaShape::flat().grid_variances(26);
        assert!(flat.iter().all(|&x| (x - 0.04 / 26.0).abs() < 1e-16));
    }

    #[test]
    fn positivity_checked() {
        assert!(SigmaShape::u_shape().validate().is_ok());
        assert!(SigmaShape::Sine { amplitude: 0.3, offset: 0.2 }.validate().is_err());
        assert!(SigmaShape::custom("zero", |_| 0.0).validate().is_err());
    }

    #[test]
    fn names_parse() {
        assert!(matches!(SigmaShape::from_name("U-Shape"), Some(SigmaShape::UShape { .. })));
        assert!(matches!(SigmaShape::from_name("flat"), Some(SigmaShape::Flat { .. })));
        assert!(SigmaShape::from_name("zigzag").is_none());
    }
}
