//! The archimedean factors γ_ℓ, γ_± and the peeled phase Φ_±.

use crate::error::{Error, Result};
use crate::gl3form::LanglandsParams;
use crate::special::{gamma_pole_distance, ln_gamma, ln_recip_gamma};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const POLE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactorSpec {
    pub alpha: [Complex64; 3],
    pub ell: u8,
    pub sign: Sign,
}

impl GammaFactorSpec {
    pub fn new(params: &LanglandsParams, ell: u8, sign: Sign) -> Result<Self> {
        if ell > 1 {
            return Err(Error::InvalidInput(format!("ℓ must be 0 or 1, got {ell}")));
        }
        Ok(GammaFactorSpec {
            alpha: params.alpha,
            ell,
            sign,
        })
    }

    pub fn trivial(sign: Sign) -> Self {
        GammaFactorSpec {
            alpha: [Complex64::new(0.0, 0.0); 3],
            ell: 0,
            sign,
        }
    }

    fn with_ell(&self, ell: u8) -> Self {
        GammaFactorSpec { ell, ..*self }
    }
}

/// ln γ_ℓ(s), or None when a denominator gamma sits exactly on a pole (γ_ℓ = 0).
fn ln_gamma_ell(s: Complex64, spec: &GammaFactorSpec) -> Result<Option<Complex64>> {
    let l = spec.ell as f64;
    let mut acc = -(3.0 * s + 1.5) * PI.ln() - 2f64.ln();
    for &a in &spec.alpha {
        let num = (1.0 + s + a + l) / 2.0;
        let dist = gamma_pole_distance(num);
        if dist < POLE_THRESHOLD {
            return Err(Error::NearPole { dist });
        }
        acc += ln_gamma(num);
    }
    for &a in &spec.alpha {
        match ln_recip_gamma((-s - a + l) / 2.0) {
            Some(v) => acc += v,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

/// γ_ℓ(s) = π^{−3s−3/2}/2 · Π Γ((1+s+αᵢ+ℓ)/2)/Γ((−s−αᵢ+ℓ)/2).
pub fn gamma_ell(s: Complex64, spec: &GammaFactorSpec) -> Result<Complex64> {
    Ok(ln_gamma_ell(s, spec)?.map_or(Complex64::new(0.0, 0.0), |v| v.exp()))
}

/// γ_±(s) = γ₀(s) ∓ iγ₁(s).
pub fn gamma_pm(s: Complex64, spec: &GammaFactorSpec) -> Result<Complex64> {
    let g0 = gamma_ell(s, &spec.with_ell(0))?;
    let g1 = gamma_ell(s, &spec.with_ell(1))?;
    Ok(g0 - Complex64::i() * spec.sign.as_f64() * g1)
}

/// Φ_±(τ) = γ_±(−1/2+iτ)·(|τ|/2eπ)^{−3iτ}, with the oscillating factor removed
/// in the log domain before exponentiating. The 2 is what Stirling gives for
/// γ_ℓ as defined here; without it Φ keeps a phase e^{−3iτ log 2}.
pub fn phi_pm(tau: f64, spec: &GammaFactorSpec) -> Result<Complex64> {
    if tau.abs() < 1.0 {
        return Err(Error::InvalidInput(format!("Φ_± needs |τ| ≥ 1, got {tau}")));
    }
    let s = Complex64::new(-0.5, tau);
    let peel = Complex64::new(0.0, -3.0 * tau * (tau.abs() / (2.0 * std::f64::consts::E * PI)).ln());
    let mut acc = Complex64::new(0.0, 0.0);
    for (ell, coef) in [
        (0u8, Complex64::new(1.0, 0.0)),
        (1, -Complex64::i() * spec.sign.as_f64()),
    ] {
        if let Some(l) = ln_gamma_ell(s, &spec.with_ell(ell))? {
            acc += coef * (l + peel).exp();
        }
    }
    Ok(acc)
}

/// The exponent 3σ + 3/2 in |γ_±(σ+iτ)| ≪ (1+|τ|)^{3σ+3/2}.
pub fn stirling_exponent(sigma: f64) -> f64 {
    3.0 * sigma + 1.5
}
