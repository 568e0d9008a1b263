use serde::Serialize;

use super::{eigvec_coefficients, interior_symbols, Split, C64};
use crate::error::{Error, Result};

/// Leading low-mode coefficient in `Q̂₁ = −ω² + κ(c) ω⁴ s² + …`,
/// `κ(c) = (1+4c)/(12−24c)`. Vanishes at `c = −1/4`.
pub fn error_model_coefficient(c: f64) -> Result<f64> {
    let den = 12.0 - 24.0 * c;
    if den == 0.0 {
        return Err(Error::InvalidParameter("error model has a pole at c = 1/2".into()));
    }
    Ok((1.0 + 4.0 * c) / den)
}

/// Exact minus truncated small-`ωs` expansions.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExpansionResiduals {
    /// `Q̂₁ − (−ω² + κ(c) ω⁴ s²)`
    pub q1: f64,
    /// `Q̂₂ − (−(4−8c)/s² + (1−4c) ω²)`
    pub q2: f64,
    /// `|α₁ − (1 − c²θ⁶ / (32(1−2c)²))|`
    pub alpha1: f64,
    /// `|β₁ − (−ic θ³ / (4−8c))|`
    pub beta1: f64,
    /// `|α₂ − ic θ / (2c−1)|`
    pub alpha2: f64,
    /// `|β₂ − 1|`
    pub beta2: f64,
}

pub fn expansion_residuals(omega: f64, h: f64, c: f64) -> Result<ExpansionResiduals> {
    let kappa = error_model_coefficient(c)?;
    let s = 0.5 * h;
    let theta = omega * s;
    let (q1, q2) = interior_symbols(omega, h, c);
    let rec = eigvec_coefficients(omega, h, c, Split::PeriodicHalf);
    let i = C64::new(0.0, 1.0);
    Ok(ExpansionResiduals {
        q1: q1 - (-omega * omega + kappa * omega.powi(4) * s * s),
        q2: q2 - (-(4.0 - 8.0 * c) / (s * s) + (1.0 - 4.0 * c) * omega * omega),
        alpha1: (rec.alpha1 - (1.0 - c * c * theta.powi(6) / (32.0 * (1.0 - 2.0 * c).powi(2)))).norm(),
        beta1: (rec.beta1 + i * c * theta.powi(3) / (4.0 - 8.0 * c)).norm(),
        alpha2: (rec.alpha2 - i * c * theta / (2.0 * c - 1.0)).norm(),
        beta2: (rec.beta2 - 1.0).norm(),
    })
}
