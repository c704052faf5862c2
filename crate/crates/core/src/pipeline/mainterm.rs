use super::sums::SumSpec;
use crate::arith::{gcd, inverse_in_range};
use crate::error::{Error, Result};
use crate::numeric::TAU;
use crate::oscillatory::quad::{integrate, uniform, DEFAULT_MAX_PANELS};
use crate::oscillatory::w_dagger_tol;
use num_complex::Complex64;
use std::f64::consts::E;

/// c₄, fitted once by least squares on `calibration_corpus()` and frozen.
pub const MAIN_TERM_C4: Complex64 = Complex64::new(18.811124422016299, 16.591841914664261);

/// C′ in |𝕴** − 𝔍₁| ≤ C′·B(C, τ), fitted on the same corpus and frozen
/// (largest observed ratio 74.2).
pub const MAIN_TERM_CPRIME: f64 = 75.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainTermCase {
    pub q: u64,
    pub m: i64,
    pub tau: f64,
    pub c: f64,
}

/// a = a_Q(m, q): the inverse of m mod q in (Q, q + Q], Q = √(N/K).
fn a_of(spec: &SumSpec, m: i64, q: u64) -> Result<f64> {
    Ok(inverse_in_range(m, q, spec.q_natural())? as f64)
}

/// 𝕴**(q, m, τ) = ∫₀¹∫ V(v) V†(Nx/aq, ½ − iτ + iKv) V*†(N(ma − x)/aq, 1 − i(t + Kv)) dv dx.
pub fn i_star_star(q: u64, m: i64, tau: f64, spec: &SumSpec, c: f64, tol: f64) -> Result<Complex64> {
    if m == 0 || q == 0 || gcd(m, q as i64) != 1 {
        return Err(Error::InvalidInput(format!(
            "need m ≠ 0 and (m, q) = 1, got m={m}, q={q}"
        )));
    }
    if !(c > 0.0 && c <= q as f64 && q as f64 <= 2.0 * c) {
        return Err(Error::PreconditionViolated(format!(
            "need C ≤ q ≤ 2C, got q={q}, C={c}"
        )));
    }
    let a = a_of(spec, m, q)?;
    let (n, t, k) = (spec.n, spec.t, spec.k);
    let aq = a * q as f64;
    let (v0, v1) = spec.v.support();
    // inner transforms to well below the outer tolerance
    let wtol = 1e-3 * tol;
    let inner = |x: f64| -> Result<Complex64> {
        let r1 = n * x / aq;
        let r2 = n * (m as f64 * a - x) / aq;
        let err = std::sync::Mutex::new(None);
        let res = integrate(
            |v| {
                let w = spec.v.value(v);
                if w == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let s1 = Complex64::new(0.5, k * v - tau);
                let s2 = Complex64::new(1.0, -(t + k * v));
                match (
                    w_dagger_tol(&spec.v, r1, s1, wtol),
                    w_dagger_tol(&spec.vstar, r2, s2, wtol),
                ) {
                    (Ok(p), Ok(q)) => p * q * w,
                    (Err(e), _) | (_, Err(e)) => {
                        *err.lock().unwrap() = Some(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            },
            &uniform(v0, v1, 4),
            0.5 * tol,
            DEFAULT_MAX_PANELS,
        );
        if let Some(e) = err.into_inner().unwrap() {
            return Err(e);
        }
        Ok(res?.value)
    };
    let failure = std::sync::Mutex::new(None);
    let res = integrate(
        |x| match inner(x) {
            Ok(z) => z,
            Err(e) => {
                *failure.lock().unwrap() = Some(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &uniform(0.0, 1.0, 4),
        0.5 * tol,
        DEFAULT_MAX_PANELS,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(res?.value)
}

/// 𝔍₁ with c₄ = 1: (1/(√(t+τ)K))·(y/e)^{3/2 − i(t+τ)}·V(y), y = −(t+τ)q/(2πNm).
pub fn j1_shape(q: u64, m: i64, tau: f64, spec: &SumSpec) -> Result<Complex64> {
    let tt = spec.t + tau;
    if m >= 0 || !(tt > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need m < 0 and t + τ > 0, got m={m}, t+τ={tt}"
        )));
    }
    let y = -tt * q as f64 / (TAU * spec.n * m as f64);
    let w = spec.v.value(y);
    if w == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let z = y / E;
    let pow = Complex64::from_polar(z.powf(1.5), -tt * z.ln());
    Ok(pow * w / (tt.sqrt() * spec.k))
}

/// 𝔍₁(q, m, τ) with the frozen c₄.
pub fn j1_main_term(q: u64, m: i64, tau: f64, spec: &SumSpec) -> Result<Complex64> {
    Ok(MAIN_TERM_C4 * j1_shape(q, m, tau, spec)?)
}

/// B(C, τ) = min{1, 10K/|τ|}/(√t K^{4/3}) + √N/(√t K^{5/2} C).
pub fn bctau(c: f64, tau: f64, spec: &SumSpec) -> f64 {
    let (n, t, k) = (spec.n, spec.t, spec.k);
    let m = if tau == 0.0 {
        1.0
    } else {
        (10.0 * k / tau.abs()).min(1.0)
    };
    m / (t.sqrt() * k.powf(4.0 / 3.0)) + n.sqrt() / (t.sqrt() * k.powf(2.5) * c)
}

/// t = 500, N = t^{1.45}, K = t^{3/8}.
pub fn calibration_spec() -> SumSpec {
    let t: f64 = 500.0;
    SumSpec::new(crate::gl3form::GL3Form::trivial(), t.powf(1.45), t, t.powf(0.375)).unwrap()
}

/// Ten (q, m, τ, C) at the calibration spec.
pub fn calibration_corpus() -> (SumSpec, Vec<MainTermCase>) {
    let spec = calibration_spec();
    let mut cases = Vec::new();
    for q in [120u64, 135, 150, 165, 180] {
        for tau in [8.0, 14.0] {
            cases.push(MainTermCase {
                q,
                m: -1,
                tau,
                c: q as f64 / 1.5,
            });
        }
    }
    (spec, cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillatory::Window;

    #[test]
    fn j1_support_and_scaling() {
        let spec = calibration_spec();
        // y = (t+τ)q/2πN far below 1
        assert_eq!(j1_shape(20, -1, 0.0, &spec).unwrap(), Complex64::new(0.0, 0.0));
        assert!(j1_shape(150, 1, 0.0, &spec).is_err());
        assert!(j1_shape(150, -1, -600.0, &spec).is_err());
        // |𝔍₁|/V(y) grows like q^{3/2}
        let scaled = |q: u64| {
            let y = 510.0 * q as f64 / (TAU * spec.n);
            j1_shape(q, -1, 10.0, &spec).unwrap().norm() / spec.v.value(y)
        };
        assert!((scaled(180) / scaled(120) - 1.5f64.powf(1.5)).abs() < 1e-12);
        let y = 510.0 * 150.0 / (TAU * spec.n);
        let want = (y / E).powf(1.5) * spec.v.value(y) / (510f64.sqrt() * spec.k);
        assert!((j1_shape(150, -1, 10.0, &spec).unwrap().norm() - want).abs() < 1e-14);
    }

    #[test]
    fn bctau_shape() {
        let spec = calibration_spec();
        let b0 = bctau(20.0, 0.0, &spec);
        let big = bctau(20.0, 1e6, &spec);
        assert!(big < b0);
        assert_eq!(bctau(20.0, 5.0, &spec), b0);
    }

    #[test]
    fn zero_window_gives_zero() {
        let spec = calibration_spec();
        let z = SumSpec {
            v: Window::v_default().with_scale(0.0),
            ..spec
        };
        assert_eq!(
            i_star_star(30, -1, 5.0, &z, 20.0, 1e-6).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn preconditions() {
        let spec = calibration_spec();
        assert!(i_star_star(30, 0, 5.0, &spec, 20.0, 1e-6).is_err());
        assert!(i_star_star(30, -1, 5.0, &spec, 10.0, 1e-6).is_err());
        assert!(i_star_star(30, -3, 5.0, &spec, 20.0, 1e-6).is_err());
    }
}
