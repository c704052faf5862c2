//! Complex log-gamma, Bernoulli numbers and the Hurwitz zeta function.

use crate::numeric::TAU;
use num_complex::Complex64;
use std::f64::consts::PI;

/// B₂, B₄, …, B₄₀.
pub const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

/// B_{2k}, k ≥ 1.
pub fn bernoulli_even(k: usize) -> f64 {
    BERNOULLI_EVEN[k - 1]
}

const STIRLING_MIN_RE: f64 = 15.0;

/// ln Γ(z) on some branch; callers only exponentiate sums of these, so the
/// branch never matters. z must not be a non-positive integer.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 0.5 || w.norm() < STIRLING_MIN_RE {
        shift += w.ln();
        w += 1.0;
    }
    let half_ln_tau = 0.5 * TAU.ln();
    let mut s = (w - 0.5) * w.ln() - w + half_ln_tau;
    let w2 = (w * w).inv();
    let mut pow = w.inv();
    for k in 1..=12 {
        let k2 = 2.0 * k as f64;
        s += pow * (bernoulli_even(k) / (k2 * (k2 - 1.0)));
        pow *= w2;
    }
    s - shift
}

/// Distance from z to the nearest pole of Γ, or ∞ when Re z is safely positive.
pub fn gamma_pole_distance(z: Complex64) -> f64 {
    if z.re > 0.5 {
        return f64::INFINITY;
    }
    let n = (-z.re).round().max(0.0);
    (z + n).norm()
}

/// ln(1/Γ(z)) by reflection, valid near the poles of Γ; None exactly at one.
pub fn ln_recip_gamma(z: Complex64) -> Option<Complex64> {
    if gamma_pole_distance(z) > 0.1 {
        return Some(-ln_gamma(z));
    }
    // 1/Γ(z) = Γ(1−z) sin(πz)/π
    let s = (z * PI).sin();
    if s.norm() == 0.0 {
        return None;
    }
    Some(ln_gamma(1.0 - z) + (s / PI).ln())
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// Hurwitz ζ(s, x) for x > 0, s ≠ 1, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: Complex64, x: f64) -> Complex64 {
    assert!(x > 0.0, "Hurwitz parameter must be positive");
    let n = (s.norm() / PI).ceil() as usize + 20;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += (-s * (k as f64 + x).ln()).exp();
    }
    let nx = n as f64 + x;
    let ln_nx = nx.ln();
    let tail_pow = (-s * ln_nx).exp();
    sum += tail_pow * nx / (s - 1.0) + tail_pow * 0.5;
    // Σ B_{2k}/(2k)! s(s+1)…(s+2k−2) (N+x)^{−s−2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut pow = tail_pow / nx;
    for k in 1..=BERNOULLI_EVEN.len() {
        let term = rising * pow * (bernoulli_even(k) / fact);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let k2 = 2.0 * k as f64;
        rising *= (s + k2 - 1.0) * (s + k2);
        fact *= (k2 + 1.0) * (k2 + 2.0);
        pow /= nx * nx;
    }
    sum
}

pub fn zeta(s: Complex64) -> Complex64 {
    hurwitz_zeta(s, 1.0)
}
