use crate::arith::{gcd, mod_inverse};
use crate::deltasym::x_integral;
use crate::error::{Error, Result};
use crate::gl3form::GL3Form;
use crate::numeric::{e_frac, CSum, TAU};
use crate::oscillatory::{w_dagger_tol, Window};
use crate::voronoi::Sign;
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct SumSpec {
    pub form: GL3Form,
    pub n: f64,
    pub t: f64,
    pub k: f64,
    /// Normalized, supported in [1, 2].
    pub v: Window,
    /// Supported in [1/2, 5/2], ≡ 1 on [1, 2].
    pub vstar: Window,
}

impl SumSpec {
    pub fn new(form: GL3Form, n: f64, t: f64, k: f64) -> Result<Self> {
        for (name, x) in [("N", n), ("K", k)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive and finite, got {x}"
                )));
            }
        }
        if !t.is_finite() {
            return Err(Error::InvalidInput(format!("t must be finite, got {t}")));
        }
        Ok(SumSpec {
            form,
            n,
            t,
            k,
            v: Window::v_default(),
            vstar: Window::v_star(),
        })
    }

    pub fn with_windows(mut self, v: Window, vstar: Window) -> Self {
        self.v = v;
        self.vstar = vstar;
        self
    }

    /// Q = √(N/K).
    pub fn q_natural(&self) -> f64 {
        (self.n / self.k).sqrt()
    }

    /// Integers strictly inside N·supp(w).
    fn range(&self, w: &Window) -> std::ops::RangeInclusive<u64> {
        let (a, b) = w.support();
        let lo = (a * self.n).floor() as u64 + 1;
        let hi = ((b * self.n).ceil() as u64).saturating_sub(1);
        lo.max(1)..=hi
    }
}

/// S(N) = Σ λ(1, n) n^{−it} V(n/N).
pub fn s_of_n(spec: &SumSpec) -> Result<Complex64> {
    if spec.n < 2.0 {
        return Err(Error::PreconditionViolated(format!(
            "N must be at least 2, got {}",
            spec.n
        )));
    }
    let mut acc = CSum::new();
    for n in spec.range(&spec.v) {
        let w = spec.v.value(n as f64 / spec.n);
        if w != 0.0 {
            acc.add(spec.form.coeff_1n(n) * Complex64::from_polar(w, -spec.t * (n as f64).ln()));
        }
    }
    Ok(acc.value())
}

/// (1/K)∫ V(v/K)(n/m)^{iv} dv = V̂(−K log(n/m)/2π).
pub fn conductor_lowering_kernel(n: u64, m: u64, k: f64, v: &Window) -> Result<Complex64> {
    kernel_tol(n, m, k, v, 1e-14)
}

fn kernel_tol(n: u64, m: u64, k: f64, v: &Window, tol: f64) -> Result<Complex64> {
    if n == 0 || m == 0 || !(k >= 1.0) {
        return Err(Error::InvalidInput(format!(
            "need n, m ≥ 1 and K ≥ 1, got ({n}, {m}, {k})"
        )));
    }
    let r = -k * (n as f64 / m as f64).ln() / TAU;
    w_dagger_tol(v, r, Complex64::new(1.0, 0.0), tol)
}

/// S^±(N) with the x-integral in closed form and the v-integral through the
/// kernel. Desk-scale only: N ≤ 200, Q ≤ 8.
pub fn s_plus_minus(spec: &SumSpec, big_q: f64, sign: Sign, tol: f64) -> Result<Complex64> {
    if spec.n > 200.0 || !(1.0..=8.0).contains(&big_q) || !(tol >= 1e-9) || spec.k < 1.0 {
        return Err(Error::PreconditionViolated(format!(
            "need N ≤ 200, 1 ≤ Q ≤ 8, K ≥ 1 and tol ≥ 1e-9; got N={}, Q={big_q}, K={}, tol={tol}",
            spec.n, spec.k
        )));
    }
    let s = sign.as_f64() as i64;
    // (q, ā mod q, aq)
    let mut moduli = Vec::new();
    for q in 1..=big_q.floor() as u64 {
        let lo = big_q.floor() as i64 + 1;
        for a in lo..=(q as f64 + big_q).floor() as i64 {
            if gcd(a, q as i64) == 1 {
                moduli.push((q, mod_inverse(a, q)?.residue as i64, (a as u64 * q) as f64));
            }
        }
    }
    let ms: Vec<(u64, f64)> = spec
        .range(&spec.vstar)
        .map(|m| (m, spec.vstar.value(m as f64 / spec.n)))
        .filter(|&(_, w)| w != 0.0)
        .collect();
    let ns: Vec<(u64, f64)> = spec
        .range(&spec.v)
        .map(|n| (n, spec.v.value(n as f64 / spec.n)))
        .filter(|&(_, w)| w != 0.0)
        .collect();
    let weight: f64 = ns.len() as f64 * ms.iter().map(|p| p.1).sum::<f64>();
    let ktol = (0.1 * tol / weight.max(1.0)).max(1e-13);

    let rows: Vec<Result<Complex64>> = ns
        .par_iter()
        .map(|&(n, vn)| {
            let lam = spec.form.coeff_1n(n) * vn;
            let mut acc = CSum::new();
            for &(m, vm) in &ms {
                let kern = kernel_tol(n, m, spec.k, &spec.v, ktol)?;
                let d = s * (n as i64 - m as i64);
                let mut circ = Complex64::new(0.0, 0.0);
                for &(q, abar, aq) in &moduli {
                    circ += e_frac(d * abar, q) * x_integral(d, aq) / aq;
                }
                let mt = Complex64::from_polar(vm, -spec.t * (m as f64).ln());
                acc.add(lam * mt * kern * circ);
            }
            Ok(acc.value())
        })
        .collect();
    let mut total = CSum::new();
    for r in rows {
        total.add(r?);
    }
    Ok(total.value())
}
