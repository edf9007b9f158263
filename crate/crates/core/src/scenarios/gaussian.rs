use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two real Gaussian wave packets `ψ(x) = (2πσ²)^(-1/4) exp(-(x-x₀)²/(4σ²))`
/// a distance `separation` apart. `width` is the standard deviation of `|ψ|²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub separation: f64,
    pub width: f64,
}

impl GaussianSpec {
    pub fn new(separation: f64, width: f64) -> Result<Self> {
        let spec = Self { separation, width };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "width must be positive, got {}",
                self.width
            )));
        }
        if !(self.separation >= 0.0) || self.separation.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "separation must be non-negative, got {}",
                self.separation
            )));
        }
        Ok(())
    }
}

/// `⟨ψ₀, ψ_D⟩ = exp(-D²/(8σ²))`.
pub fn gaussian_overlap(spec: &GaussianSpec) -> Result<f64> {
    spec.validate()?;
    let r = spec.separation / spec.width;
    Ok((-r * r / 8.0).exp())
}

/// `∫ ψ₀ ψ_D dx` by composite Simpson over `[−12σ, D + 12σ]`.
pub fn overlap_quadrature(spec: &GaussianSpec, intervals: usize) -> Result<f64> {
    spec.validate()?;
    if intervals < 2 || intervals % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "Simpson needs an even interval count >= 2, got {intervals}"
        )));
    }
    let (w, d) = (spec.width, spec.separation);
    let (a, b) = (-12.0 * w, d + 12.0 * w);
    let h = (b - a) / intervals as f64;
    let f = |x: f64| gaussian_amplitude(x, 0.0, w) * gaussian_amplitude(x, d, w);
    let inner: f64 = (1..intervals)
        .map(|k| if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h))
        .sum();
    Ok((f(a) + f(b) + inner) * h / 3.0)
}

/// Wave packet centred at `center`, sampled at `x`.
pub fn gaussian_amplitude(x: f64, center: f64, width: f64) -> f64 {
    let norm = (2.0 * std::f64::consts::PI * width * width).powf(-0.25);
    norm * (-(x - center).powi(2) / (4.0 * width * width)).exp()
}
