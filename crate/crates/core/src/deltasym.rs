//! Kloosterman's form of the delta symbol as a finite exact sum.

use crate::arith::{gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::numeric::{e, e_frac, Dd, Precision, TAU};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSpec {
    pub n: i64,
    pub big_q: f64,
}

impl DeltaSpec {
    pub fn new(n: i64, big_q: f64) -> Result<Self> {
        if !(big_q >= 1.0) || !big_q.is_finite() {
            return Err(Error::InvalidInput(format!("Q must be a finite real ≥ 1, got {big_q}")));
        }
        Ok(DeltaSpec { n, big_q })
    }
}

/// ∫₀¹ e(−nx/M) dx.
pub fn x_integral(n: i64, m: f64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let w = n as f64 / m;
    (e(-w) - 1.0) / Complex64::new(0.0, -TAU * w)
}

fn terms(spec: &DeltaSpec, coprime_only: bool) -> impl Iterator<Item = f64> + '_ {
    let big_q = spec.big_q;
    let qmax = big_q.floor() as u64;
    (1..=qmax).flat_map(move |q| {
        let lo = big_q.floor() as i64 + 1;
        let hi = (q as f64 + big_q).floor() as i64;
        (lo..=hi).filter_map(move |a| {
            let ok = gcd(a, q as i64) == 1;
            if coprime_only && !ok {
                return None;
            }
            let abar = if ok {
                mod_inverse(a, q).unwrap().residue as i64
            } else {
                1
            };
            let m = (a as f64) * q as f64;
            let z = e_frac(spec.n * abar, q) * x_integral(spec.n, m) / m;
            Some(2.0 * z.re)
        })
    })
}

/// 2 Re Σ_{q≤Q} Σ*_{Q<a≤q+Q} (1/aq) e(nā/q) ∫₀¹ e(−nx/aq) dx.
pub fn delta_eval(spec: &DeltaSpec) -> f64 {
    delta_eval_with(spec, Precision::DoubleDouble)
}

pub fn delta_eval_with(spec: &DeltaSpec, prec: Precision) -> f64 {
    match prec {
        Precision::Double => terms(spec, true).sum(),
        Precision::DoubleDouble => terms(spec, true)
            .fold(Dd::default(), |s, x| s.add(Dd::from_f64(x)))
            .to_f64(),
    }
}

/// Same sum without the (a, q) = 1 restriction; not an identity.
pub fn delta_eval_all_pairs(spec: &DeltaSpec) -> f64 {
    terms(spec, false)
        .fold(Dd::default(), |s, x| s.add(Dd::from_f64(x)))
        .to_f64()
}

/// Q = √(N/K).
pub fn q_natural(n: f64, k: f64) -> f64 {
    assert!(n > 0.0 && k > 0.0);
    (n / k).sqrt()
}
