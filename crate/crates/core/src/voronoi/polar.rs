//! The residue term of the Voronoi identity.
//!
//! With λ(1, n) = Σ_{n₁n₂n₃=n} Π n_i^{−αᵢ}, the twisted series
//! D(s, a/q) = Σ λ(1, n) e(an/q) n^{−s} is a finite combination of Hurwitz
//! zeta products and has poles at s = 1 − αᵢ. Moving the Mellin contour past
//! them leaves Res[D(s, a/q) g̃(s)] next to the dual sum.

use crate::error::Result;
use crate::gl3form::GL3Form;
use crate::numeric::{e_frac, CSum};
use crate::oscillatory::{mellin, Window};
use crate::special::hurwitz_zeta;
use num_complex::Complex64;
use std::f64::consts::PI;

const CIRCLE_POINTS: usize = 96;

/// D(s, a/q) = q^{−3s} Σ_{b ∈ [1,q]³} e(a b₁b₂b₃/q) Π q^{−αᵢ} ζ(s+αᵢ, bᵢ/q).
pub fn twisted_series(alpha: &[Complex64; 3], a: i64, q: u64, s: Complex64) -> Complex64 {
    let qf = q as f64;
    let lq = qf.ln();
    let z: Vec<Vec<Complex64>> = alpha
        .iter()
        .map(|&al| {
            (1..=q)
                .map(|b| (-(s + al) * lq).exp() * hurwitz_zeta(s + al, b as f64 / qf))
                .collect()
        })
        .collect();
    let mut acc = CSum::new();
    for b1 in 1..=q {
        for b2 in 1..=q {
            let pre = z[0][(b1 - 1) as usize] * z[1][(b2 - 1) as usize];
            let ab = (a.rem_euclid(q as i64) as u64 * b1 % q) * b2 % q;
            let mut inner = Complex64::new(0.0, 0.0);
            for b3 in 1..=q {
                inner += z[2][(b3 - 1) as usize] * e_frac((ab * b3 % q) as i64, q);
            }
            acc.add(pre * inner);
        }
    }
    acc.value()
}

/// Σ Res_{s=1−αᵢ} D(s, a/q) g̃(s), by the trapezoid rule on a circle around s = 1.
pub fn polar_term(form: &GL3Form, a: i64, q: u64, g: &Window) -> Result<Complex64> {
    let alpha = form.params.alpha;
    let radius = alpha.iter().map(|z| z.norm()).fold(0.0, f64::max) + 0.5;
    let center = Complex64::new(1.0, 0.0);
    let mut acc = CSum::new();
    for j in 0..CIRCLE_POINTS {
        let w = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / CIRCLE_POINTS as f64);
        let s = center + w;
        acc.add(twisted_series(&alpha, a, q, s) * mellin(g, s)? * w);
    }
    Ok(acc.value() / CIRCLE_POINTS as f64)
}
