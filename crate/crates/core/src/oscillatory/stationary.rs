//! First-derivative bound and leading-term stationary-phase expansion.

use super::{OscIntegralSpec, Phase};
use crate::error::{Error, Result};
use crate::numeric::e;
use num_complex::Complex64;

const SCAN: usize = 4000;

/// Signs of f' on a uniform grid over [a, b]; returns the brackets of sign changes.
fn sign_changes(f: &dyn Phase, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut px = a;
    let mut pv = f.d1(a);
    for i in 1..=SCAN {
        let x = if i == SCAN {
            b
        } else {
            a + (b - a) * i as f64 / SCAN as f64
        };
        let v = f.d1(x);
        if v == 0.0 && i < SCAN {
            out.push((x, x));
        } else if pv != 0.0 && v != 0.0 && (pv < 0.0) != (v < 0.0) {
            out.push((px, x));
        }
        px = x;
        pv = v;
    }
    out
}

/// The unique zero of f' in (a, b), by bisection and a Newton polish.
pub fn find_stationary_point(f: &dyn Phase, a: f64, b: f64) -> Result<f64> {
    let brackets = sign_changes(f, a, b);
    let (mut lo, mut hi) = match brackets.as_slice() {
        [] => return Err(Error::NoStationaryPoint),
        [one] => *one,
        _ => return Err(Error::MultipleStationaryPoints),
    };
    if lo == hi {
        return Ok(lo);
    }
    let neg_at_lo = f.d1(lo) < 0.0;
    while hi - lo > 1e-12 * lo.abs().max(hi.abs()).max(1e-300) {
        let mid = 0.5 * (lo + hi);
        let v = f.d1(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if (v < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..2 {
        let j = f.jet(x);
        if j.c[2] == 0.0 {
            break;
        }
        let step = j.deriv(1) / j.deriv(2);
        let nx = x - step;
        if nx < lo || nx > hi {
            break;
        }
        x = nx;
    }
    Ok(x)
}

/// Θ/(Ω²Λ³)·(1 + Ω/Ω_g + (Ω²/Ω_g²)·Λ/(Θ/Ω)) for a phase without stationary points.
pub fn sp_bound_first(spec: &OscIntegralSpec) -> Result<f64> {
    let f = spec.phase.as_ref();
    if !sign_changes(f, spec.a, spec.b).is_empty() {
        return Err(Error::PreconditionViolated("f' changes sign on [a, b]".into()));
    }
    let mut lam = f64::INFINITY;
    let mut f2_sign = 0.0f64;
    for x in spec.grid(SCAN) {
        let j = f.jet(x);
        lam = lam.min(j.c[1].abs());
        let s = j.c[2].signum();
        if j.c[2] == 0.0 || (f2_sign != 0.0 && s != f2_sign) {
            return Err(Error::PreconditionViolated("f'' vanishes on [a, b]".into()));
        }
        f2_sign = s;
    }
    let lam = spec.lambda.unwrap_or(lam);
    let (th, om, og) = (spec.theta, spec.omega_f, spec.omega_g);
    Ok(th / (om * om * lam.powi(3)) * (1.0 + om / og + (om * om) / (og * og) * lam / (th / om)))
}

/// Leading term g(x₀)e(f(x₀)+1/8)/√f''(x₀) and the lemma's error bound.
///
/// The square root is the principal branch, so f'' < 0 gives the conjugate
/// rotation e(−1/8).
pub fn sp_expand(spec: &OscIntegralSpec) -> Result<(Complex64, f64)> {
    let f = spec.phase.as_ref();
    let x0 = find_stationary_point(f, spec.a, spec.b)?;
    let j = f.jet(x0);
    let f2 = j.deriv(2);
    if f2 == 0.0 {
        return Err(Error::PreconditionViolated("f''(x₀) = 0".into()));
    }
    let main = e(j.c[0] + 0.125) * spec.g.value(x0) / Complex64::new(f2, 0.0).sqrt();
    let kappa = spec.kappa.unwrap_or((spec.b - x0).min(x0 - spec.a));
    let (th, om, og) = (spec.theta, spec.omega_f, spec.omega_g);
    let bound = om.powi(4) / (th * th * kappa.powi(3)) + om / th.powf(1.5) + om.powi(3) / (th.powf(1.5) * og * og);
    Ok((main, bound))
}
