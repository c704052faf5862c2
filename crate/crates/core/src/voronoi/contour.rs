//! G_±(y) = (1/2πi)∫_(σ) y^{−s} γ_±(s) g̃(−s) ds by the trapezoid rule on the
//! vertical line.
//!
//! The integrand is analytic in a strip, so the trapezoid rule converges
//! geometrically: spacing Δτ aliases G(y) against y·e^{∓2π/Δτ}-shifted copies,
//! which at 20 points per unit height is far below roundoff. Many y at once go
//! through a type-2 NUFFT.

use super::gamma::{gamma_pm, GammaFactorSpec};
use super::nufft::Nufft2;
use crate::error::{Error, Result};
use crate::numeric::TAU;
use crate::oscillatory::Window;
use num_complex::Complex64;

const TAU_START: f64 = 32.0;
const TAU_LIMIT: f64 = 65536.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub sigma: f64,
    /// None: double from 32 until the last octave carries < 10⁻² of the tolerance.
    pub tau_max: Option<f64>,
    /// Quadrature points per unit height.
    pub density: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            sigma: -0.5,
            tau_max: None,
            density: 20.0,
        }
    }
}

impl ContourSpec {
    pub fn at(sigma: f64) -> Self {
        ContourSpec {
            sigma,
            ..Self::default()
        }
    }

    pub fn validate(&self, spec: &GammaFactorSpec) -> Result<()> {
        let floor = -1.0 + spec.alpha.iter().map(|a| -a.re).fold(f64::NEG_INFINITY, f64::max);
        if !(self.sigma > floor) {
            return Err(Error::InvalidInput(format!("σ = {} must exceed {floor}", self.sigma)));
        }
        if self.density <= 0.0 || self.tau_max.map_or(false, |t| t <= 0.0) {
            return Err(Error::InvalidInput(
                "contour density and height must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// g̃(−σ−iτ) = ∫ g(eᵘ) e^{−σu} e^{−iτu} du by the trapezoid rule in u = log x,
/// with a step fine enough to resolve frequencies up to `tau_max` plus a margin.
struct LogSamples {
    u0: f64,
    du: f64,
    u: Vec<f64>,
    w: Vec<f64>,
}

impl LogSamples {
    fn new(g: &Window, sigma: f64, tau_max: f64) -> Self {
        let (a, b) = g.support();
        let (ua, ub) = (a.ln(), b.ln());
        let len = ub - ua;
        let n = ((len * tau_max + 800.0) / TAU).ceil() as usize + 2;
        let du = len / n as f64;
        let mut u = Vec::with_capacity(n);
        let mut w = Vec::with_capacity(n);
        for j in 1..n {
            let uj = ua + du * j as f64;
            let v = g.value(uj.exp());
            if v != 0.0 {
                u.push(uj);
                w.push(v * (-sigma * uj).exp() * du);
            }
        }
        LogSamples { u0: ua, du, u, w }
    }

    /// g̃(−σ−ikΔτ) for |k| ≤ K. The u-grid is uniform, so this is one more
    /// type-2 NUFFT with the roles of frequency and position swapped.
    fn on_grid(&self, dtau: f64, k: i64) -> Vec<Complex64> {
        let idx: Vec<i64> = self
            .u
            .iter()
            .map(|&u| ((u - self.u0) / self.du).round() as i64)
            .collect();
        let (lo, hi) = (idx[0], idx[idx.len() - 1]);
        let mid = (lo + hi) / 2;
        let half = (mid - lo).max(hi - mid);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (2 * half + 1) as usize];
        for (&j, &w) in idx.iter().zip(&self.w) {
            coeffs[(j - mid + half) as usize] = Complex64::new(w, 0.0);
        }
        let plan = Nufft2::new(&coeffs);
        let uc = self.u0 + mid as f64 * self.du;
        (-k..=k)
            .map(|m| {
                let tau = m as f64 * dtau;
                plan.eval(-tau * self.du) * Complex64::from_polar(1.0, -tau * uc)
            })
            .collect()
    }

    #[cfg(test)]
    fn eval(&self, tau: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&u, &w) in self.u.iter().zip(&self.w) {
            acc += Complex64::from_polar(w, -tau * u);
        }
        acc
    }
}

/// Samples h_k = γ_±(σ+ikΔτ)·g̃(−σ−ikΔτ), |k| ≤ K, ready for evaluation at any y.
#[derive(Debug, Clone)]
pub struct GTransform {
    pub spec: GammaFactorSpec,
    pub sigma: f64,
    pub dtau: f64,
    pub tau_max: f64,
    h: Vec<Complex64>,
    /// (Δτ/2π)·Σ|h_k| over the outermost octave; the tail scale at y = 1.
    tail: f64,
    /// Σ|h_k|, which sets the roundoff level of the τ-sum.
    mass: f64,
    plan: Option<Nufft2>,
}

impl GTransform {
    pub fn new(spec: &GammaFactorSpec, g: &Window, contour: &ContourSpec, tol: f64) -> Result<Self> {
        contour.validate(spec)?;
        let dtau = 1.0 / contour.density;
        let mut tau_max = contour.tau_max.unwrap_or(TAU_START);
        loop {
            let t = Self::sample(spec, g, contour.sigma, dtau, tau_max)?;
            if contour.tau_max.is_some() || t.tail < 1e-2 * tol {
                return Ok(t);
            }
            if tau_max >= TAU_LIMIT {
                return Err(Error::TailTooLarge { tail: t.tail, tol });
            }
            tau_max *= 2.0;
        }
    }

    fn sample(spec: &GammaFactorSpec, g: &Window, sigma: f64, dtau: f64, tau_max: f64) -> Result<Self> {
        let k = (tau_max / dtau).ceil() as i64;
        let logs = LogSamples::new(g, sigma, tau_max);
        let mellin = logs.on_grid(dtau, k);
        // below this g̃ is roundoff, which γ would amplify when σ > −1/2
        let floor = 64.0 * f64::EPSILON * logs.w.iter().map(|w| w.abs()).sum::<f64>();
        let mut h = Vec::with_capacity(mellin.len());
        for (j, m) in (-k..=k).zip(mellin) {
            if m.norm() <= floor {
                h.push(Complex64::new(0.0, 0.0));
                continue;
            }
            let gam = gamma_pm(Complex64::new(sigma, j as f64 * dtau), spec)?;
            h.push(gam * m);
        }
        let outer: f64 = h
            .iter()
            .enumerate()
            .filter(|(j, _)| (*j as i64 - k).abs() * 2 >= k)
            .map(|(_, v)| v.norm())
            .sum();
        let mass = h.iter().map(|v| v.norm()).sum();
        Ok(GTransform {
            spec: *spec,
            sigma,
            dtau,
            tau_max,
            h,
            tail: outer * dtau / TAU,
            mass,
            plan: None,
        })
    }

    /// Builds the NUFFT plan used by `eval_many`.
    pub fn with_plan(mut self) -> Self {
        self.plan = Some(Nufft2::new(&self.h));
        self
    }

    /// Estimated truncation error at y.
    pub fn tail(&self, y: f64) -> f64 {
        self.tail * y.powf(-self.sigma)
    }

    /// Roundoff level of a computed G(y); values below it carry no signal.
    pub fn noise(&self, y: f64) -> f64 {
        16.0 * f64::EPSILON * self.mass * self.prefactor(y)
    }

    fn prefactor(&self, y: f64) -> f64 {
        y.powf(-self.sigma) * self.dtau / TAU
    }

    /// G_±(y) by direct summation.
    pub fn eval(&self, y: f64) -> Complex64 {
        let k = (self.h.len() / 2) as f64;
        let x = -self.dtau * y.ln();
        // e^{i(j−K)x} by a rotation recurrence, re-seeded every 256 steps
        let step = Complex64::from_polar(1.0, x);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut rot = Complex64::new(0.0, 0.0);
        for (j, &hj) in self.h.iter().enumerate() {
            if j % 256 == 0 {
                rot = Complex64::from_polar(1.0, (j as f64 - k) * x);
            }
            acc += hj * rot;
            rot *= step;
        }
        acc * self.prefactor(y)
    }

    /// G_±(y) at many points; uses the NUFFT plan when present.
    pub fn eval_many(&self, ys: &[f64]) -> Vec<Complex64> {
        match &self.plan {
            Some(p) => ys
                .iter()
                .map(|&y| p.eval(-self.dtau * y.ln()) * self.prefactor(y))
                .collect(),
            None => ys.iter().map(|&y| self.eval(y)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue {
    pub value: Complex64,
    pub tail: f64,
}

/// G_±(y) with its tail estimate; the sign lives in `spec`.
pub fn big_g(y: f64, spec: &GammaFactorSpec, g: &Window, contour: &ContourSpec, tol: f64) -> Result<GValue> {
    if !(y > 0.0) {
        return Err(Error::InvalidInput(format!("G_± needs y > 0, got {y}")));
    }
    let t = GTransform::new(spec, g, contour, tol)?;
    let tail = t.tail(y);
    if tail > tol {
        return Err(Error::TailTooLarge { tail, tol });
    }
    Ok(GValue { value: t.eval(y), tail })
}

/// y beyond which |G_±| stays below `level`, scanning a geometric grid.
pub fn decay_threshold(t: &GTransform, level: f64) -> f64 {
    let ys: Vec<f64> = (0..=600).map(|i| 1e-3 * 10f64.powf(i as f64 / 50.0)).collect();
    let vals = t.eval_many(&ys);
    let mut cut = ys[0];
    for (y, v) in ys.iter().zip(&vals).rev() {
        if v.norm() > level {
            cut = *y;
            break;
        }
    }
    cut * 10f64.powf(1.0 / 50.0)
}

#[cfg(test)]
mod tests {
    use super::super::gamma::Sign;
    use super::*;
    use crate::oscillatory::mellin;

    fn window() -> Window {
        Window::kaiser_bump(20.0, 60.0, 22.0, 1.0).normalized()
    }

    #[test]
    fn log_samples_match_mellin_quadrature() {
        let g = window();
        let logs = LogSamples::new(&g, -0.5, 200.0);
        for tau in [0.0, 3.0, -17.5, 120.0] {
            let want = mellin(&g, Complex64::new(0.5, -tau)).unwrap();
            assert!((logs.eval(tau) - want).norm() < 1e-12 * (1.0 + want.norm()), "τ={tau}");
        }
        let grid = logs.on_grid(0.05, 4000);
        for m in [-4000i64, -123, 0, 77, 3999] {
            let d = logs.eval(m as f64 * 0.05);
            assert!(
                (grid[(m + 4000) as usize] - d).norm() < 1e-12 * (1.0 + d.norm()),
                "m={m}"
            );
        }
    }

    #[test]
    fn nufft_matches_direct() {
        let spec = GammaFactorSpec::trivial(Sign::Plus);
        let t = GTransform::new(&spec, &window(), &ContourSpec::default(), 1e-10)
            .unwrap()
            .with_plan();
        let ys = [0.01, 0.7, 3.0, 55.5, 900.0];
        let fast = t.eval_many(&ys);
        for (y, f) in ys.iter().zip(&fast) {
            let d = t.eval(*y);
            assert!((d - *f).norm() < 1e-11 * (1.0 + y.sqrt()), "y={y}: {d} vs {f}");
        }
    }

    #[test]
    fn contour_shift_invariance() {
        let g = window();
        for sign in Sign::both() {
            let spec = GammaFactorSpec::trivial(sign);
            for y in [0.3, 2.0, 40.0] {
                let vals: Vec<GValue> = [-0.5, 0.0, 0.5]
                    .iter()
                    .map(|&s| big_g(y, &spec, &g, &ContourSpec::at(s), 1e-9).unwrap())
                    .collect();
                for v in &vals[1..] {
                    let tol = 1e-9 * (1.0 + vals[0].value.norm()) + v.tail + vals[0].tail;
                    assert!(
                        (v.value - vals[0].value).norm() < tol,
                        "y={y}: {} vs {}",
                        v.value,
                        vals[0].value
                    );
                }
            }
        }
    }

    #[test]
    fn conjugate_symmetry_for_real_parameters() {
        let g = window();
        let c = ContourSpec::default();
        for y in [0.05, 1.0, 12.0] {
            let p = big_g(y, &GammaFactorSpec::trivial(Sign::Plus), &g, &c, 1e-9)
                .unwrap()
                .value;
            let m = big_g(y, &GammaFactorSpec::trivial(Sign::Minus), &g, &c, 1e-9)
                .unwrap()
                .value;
            assert!((p - m.conj()).norm() < 1e-12 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn decays_for_large_y() {
        let spec = GammaFactorSpec::trivial(Sign::Plus);
        let t = GTransform::new(&spec, &window(), &ContourSpec::default(), 1e-10)
            .unwrap()
            .with_plan();
        let y_star = decay_threshold(&t, 1e-8);
        let beyond = t.eval(4.0 * y_star);
        assert!(beyond.norm() < 1e-8);
        assert!(y_star > 1.0 && y_star < 1e6);
        assert!(matches!(
            big_g(-1.0, &spec, &window(), &ContourSpec::default(), 1e-9),
            Err(Error::InvalidInput(_))
        ));
    }
}
