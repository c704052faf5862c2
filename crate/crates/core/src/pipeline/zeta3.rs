use crate::error::{Error, Result};
use crate::special::bernoulli_even;
use num_complex::Complex64;
use std::f64::consts::PI;

pub const ZETA_T_CAP: f64 = 1e4;

/// ζ(s) by Euler–Maclaurin with `n` direct terms and at most `k` correction
/// terms, with the standard remainder bound
/// |s(s+1)…(s+2k+1)|·|B_{2k+2}|/(2k+2)!·n^{−σ−2k−1}/(σ+2k+1).
pub fn zeta_em(s: Complex64, n: usize, k: usize) -> (Complex64, f64) {
    assert!(n >= 1 && k >= 1 && k < 20 && s.re > -1.0);
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..n {
        sum += (-s * (j as f64).ln()).exp();
    }
    let np = (-s * nf.ln()).exp();
    sum += np * nf / (s - 1.0) + np * 0.5;
    let mut rising = s;
    let mut fact = 2.0;
    let mut pow = np / nf;
    for j in 1..=k {
        sum += rising * pow * (bernoulli_even(j) / fact);
        let j2 = 2.0 * j as f64;
        rising *= (s + j2 - 1.0) * (s + j2);
        fact *= (j2 + 1.0) * (j2 + 2.0);
        pow /= nf * nf;
    }
    // rising·(s+2k+1) = s(s+1)…(s+2k+1), fact = (2k+2)!, pow = n^{−s−2k−1}
    let bound = (rising * (s + 2.0 * k as f64 + 1.0)).norm() * bernoulli_even(k + 1).abs() / fact * pow.norm()
        / (s.re + 2.0 * k as f64 + 1.0);
    (sum, bound)
}

/// ζ(1/2 + it)³ for |t| ≤ 10⁴.
pub fn zeta_cubed_reference(t: f64) -> Result<Complex64> {
    if !(t.abs() <= ZETA_T_CAP) {
        return Err(Error::OutOfRange(format!("|t| must be at most {ZETA_T_CAP}, got {t}")));
    }
    let s = Complex64::new(0.5, t);
    let n = (s.norm() / PI).ceil() as usize + 20;
    let (z, bound) = zeta_em(s, n, 19);
    // the cube's error is about 3|ζ|²·bound
    if 3.0 * (z.norm() + bound).powi(2) * bound > 1e-10 {
        return Err(Error::NoConvergence { err: bound, tol: 1e-10 });
    }
    Ok(z * z * z)
}
