//! W†(r, s) = ∫ W(x) e(−rx) x^{s−1} dx and its stationary-phase main term.

use super::{osc_integral, Window};
use crate::error::Result;
use crate::numeric::{e, TAU};
use num_complex::Complex64;

/// Default absolute tolerance for transform evaluations.
pub const DAGGER_TOL: f64 = 1e-13;

pub fn w_dagger(w: &Window, r: f64, s: Complex64) -> Result<Complex64> {
    w_dagger_tol(w, r, s, DAGGER_TOL)
}

pub fn w_dagger_tol(w: &Window, r: f64, s: Complex64, tol: f64) -> Result<Complex64> {
    let (a, b) = w.support();
    let (sigma, beta) = (s.re, s.im);
    let c_log = beta / TAU;
    let amp = |x: f64| {
        let v = w.value(x);
        if v == 0.0 {
            0.0
        } else {
            v * x.powf(sigma - 1.0)
        }
    };
    Ok(osc_integral(amp, |x| -r * x + c_log * x.ln(), |x| -r + c_log / x, a, b, tol)?.value)
}

/// Mellin transform ∫ W(x) x^{s−1} dx.
pub fn mellin(w: &Window, s: Complex64) -> Result<Complex64> {
    w_dagger(w, 0.0, s)
}

/// Main term √(2π)e(1/8)/√(−β)·W(x₀)x₀^σ(x₀/e)^{iβ} with x₀ = β/2πr, and the
/// error scale min(|β|, |r|)^{−3/2}.
pub fn w_dagger_asymptotic(w: &Window, r: f64, s: Complex64) -> (Complex64, f64) {
    let (sigma, beta) = (s.re, s.im);
    let bound = beta.abs().min(r.abs()).powf(-1.5);
    if r == 0.0 || beta == 0.0 {
        return (Complex64::new(0.0, 0.0), bound);
    }
    let x0 = beta / (TAU * r);
    if x0 <= 0.0 {
        return (Complex64::new(0.0, 0.0), bound);
    }
    let wv = w.value(x0);
    if wv == 0.0 {
        return (Complex64::new(0.0, 0.0), bound);
    }
    let root = Complex64::new(-beta, 0.0).sqrt();
    let main = e(0.125) * TAU.sqrt() / root * wv * x0.powf(sigma) * e(beta * (x0.ln() - 1.0) / TAU);
    (main, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mellin_examples() {
        let v = Window::bump(1.0, 2.0).normalized();
        assert!((w_dagger(&v, 0.0, c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-13);
        let m2 = mellin(&v, c(2.0, 0.0)).unwrap();
        assert!((m2.re - v.moment(1)).abs() < 1e-13 && m2.im.abs() < 1e-15);
        let s = c(0.3, 4.0);
        assert!((mellin(&v, s.conj()).unwrap() - mellin(&v, s).unwrap().conj()).norm() < 1e-13);
    }

    #[test]
    fn fourier_conjugate_symmetry() {
        let v = Window::v_star();
        let a = w_dagger(&v, 3.7, c(1.0, 0.0)).unwrap();
        let b = w_dagger(&v, -3.7, c(1.0, 0.0)).unwrap();
        assert!((a - b.conj()).norm() < 1e-13);
    }

    #[test]
    fn main_term_modulus() {
        let v = Window::bump(1.0, 2.0);
        let beta = 300.0;
        let r = beta / (TAU * 1.3);
        let (m, _) = w_dagger_asymptotic(&v, r, c(0.5, beta));
        let want = v.value(1.3) * 1.3f64.sqrt() * (TAU / beta).sqrt();
        assert!((m.norm() - want).abs() < 1e-13);
        // outside the support the main term vanishes and the transform is tiny
        let r_far = beta / (TAU * 6.0);
        assert_eq!(w_dagger_asymptotic(&v, r_far, c(0.5, beta)).0, c(0.0, 0.0));
    }

    #[test]
    fn main_term_tracks_transform() {
        let v = Window::bump(1.0, 2.0);
        for beta in [-2000.0, 2000.0] {
            let r = beta / (TAU * 1.5);
            let (m, bound) = w_dagger_asymptotic(&v, r, c(0.0, beta));
            let q = w_dagger(&v, r, c(0.0, beta)).unwrap();
            assert!((q - m).norm() < 50.0 * bound, "β={beta}: {q} vs {m}");
        }
    }
}
