//! Langlands parameters and the coefficient engine λ(n₁, n₂).
//!
//! At a prime p the coefficients are Schur polynomials in the Satake
//! parameters x_i = p^{-α_i}: λ(p^a, p^b) = s_{(a+b, a, 0)}(x₁, x₂, x₃).
//! With this indexing λ(1, p) = s_(1) and λ(p, 1) = s_(1,1), matching
//! L(s) = Σ λ(1, n) n^{-s} and the Hecke relation λ(1,p)² = λ(1,p²) + λ(p,1).

use crate::arith::factorize;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::RwLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanglandsParams {
    pub nu1: Complex64,
    pub nu2: Complex64,
    pub alpha: [Complex64; 3],
}

fn check_bound(alpha: &[Complex64; 3]) -> Result<()> {
    for (i, a) in alpha.iter().enumerate() {
        if a.re.abs() >= 0.5 {
            return Err(Error::OutOfRange(format!(
                "Re(α{}) = {} violates |Re α| < 1/2",
                i + 1,
                a.re
            )));
        }
    }
    Ok(())
}

/// α₁ = −ν₁−2ν₂+1, α₂ = −ν₁+ν₂, α₃ = 2ν₁+ν₂−1.
pub fn params_from_nu(nu1: Complex64, nu2: Complex64) -> Result<LanglandsParams> {
    let one = Complex64::new(1.0, 0.0);
    let alpha = [-nu1 - 2.0 * nu2 + one, -nu1 + nu2, 2.0 * nu1 + nu2 - one];
    check_bound(&alpha)?;
    Ok(LanglandsParams { nu1, nu2, alpha })
}

impl LanglandsParams {
    /// Parameters from a user-supplied α triple summing to zero.
    pub fn from_alpha(alpha: [Complex64; 3]) -> Result<Self> {
        let s = alpha[0] + alpha[1] + alpha[2];
        if s.norm() > 1e-12 {
            return Err(Error::InvalidInput(format!("α must sum to zero, got {s}")));
        }
        check_bound(&alpha)?;
        let one = Complex64::new(1.0, 0.0);
        let nu1 = (alpha[2] - alpha[1] + one) / 3.0;
        let nu2 = (alpha[1] - alpha[0] + one) / 3.0;
        Ok(LanglandsParams { nu1, nu2, alpha })
    }

    pub fn from_real_alpha(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        Self::from_alpha([a1, a2, a3].map(|a| Complex64::new(a, 0.0)))
    }

    /// α = (0, 0, 0), the ζ³ instance.
    pub fn trivial() -> Self {
        let third = Complex64::new(1.0 / 3.0, 0.0);
        LanglandsParams {
            nu1: third,
            nu2: third,
            alpha: [Complex64::new(0.0, 0.0); 3],
        }
    }

    /// Parameters of the contragredient form, (−α₃, −α₂, −α₁).
    pub fn dual(&self) -> Self {
        let a = self.alpha;
        LanglandsParams {
            nu1: self.nu2,
            nu2: self.nu1,
            alpha: [-a[2], -a[1], -a[0]],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha.iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.alpha.iter().all(|a| a.im == 0.0)
    }
}

/// s_{(l1, l2, 0)}(x) by Gelfand–Tsetlin pattern enumeration.
pub fn schur_tableaux(l1: u32, l2: u32, x: &[Complex64; 3]) -> Complex64 {
    let deg = (l1 + l2) as usize;
    let pows: Vec<Vec<Complex64>> = x.iter().map(|&xi| powers(xi, deg)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for m1 in l2..=l1 {
        for m2 in 0..=l2 {
            let w3 = pows[2][(l1 + l2 - m1 - m2) as usize];
            let mut inner = Complex64::new(0.0, 0.0);
            for k in m2..=m1 {
                inner += pows[0][k as usize] * pows[1][(m1 + m2 - k) as usize];
            }
            total += inner * w3;
        }
    }
    total
}

fn powers(x: Complex64, n: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(n + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        v.push(p);
        p *= x;
    }
    v
}

/// s_{(l1, l2, 0)}(x) as a ratio of alternants.
pub fn schur_bialternant(l1: u32, l2: u32, x: &[Complex64; 3]) -> Complex64 {
    let e = [l1 as i32 + 2, l2 as i32 + 1, 0];
    let num = det3(|i, j| x[j].powi(e[i]));
    let den = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2]);
    num / den
}

fn det3(m: impl Fn(usize, usize) -> Complex64) -> Complex64 {
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

/// Relative separation below which the alternant ratio loses too many digits.
const COLLISION_THRESHOLD: f64 = 1e-3;

pub fn schur(l1: u32, l2: u32, x: &[Complex64; 3]) -> Complex64 {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sep = (x[0] - x[1]).norm() * (x[0] - x[2]).norm() * (x[1] - x[2]).norm() / scale.powi(3);
    if sep < COLLISION_THRESHOLD {
        schur_tableaux(l1, l2, x)
    } else {
        schur_bialternant(l1, l2, x)
    }
}

/// Smallest prime factors up to a bound.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    spf: Vec<u32>,
}

impl PrimeSieve {
    pub fn new(cap: u64) -> Self {
        let cap = cap as usize;
        let mut spf = vec![0u32; cap + 1];
        for i in 2..=cap {
            if spf[i] == 0 {
                for j in (i..=cap).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        PrimeSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Smallest prime factor of 2 ≤ n ≤ limit.
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }
}

/// Coefficient engine with an insert-once cache of prime-power values.
#[derive(Debug)]
pub struct GL3Form {
    pub params: LanglandsParams,
    cache: RwLock<HashMap<(u64, u64), Complex64>>,
}

impl Clone for GL3Form {
    fn clone(&self) -> Self {
        GL3Form::new(self.params)
    }
}

impl GL3Form {
    pub fn new(params: LanglandsParams) -> Self {
        GL3Form {
            params,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn trivial() -> Self {
        Self::new(LanglandsParams::trivial())
    }

    pub fn dual(&self) -> Self {
        Self::new(self.params.dual())
    }

    fn satake(&self, p: u64) -> [Complex64; 3] {
        let lp = (p as f64).ln();
        self.params.alpha.map(|a| (-a * lp).exp())
    }

    /// λ(p^a, p^b).
    pub fn prime_power(&self, p: u64, a: u32, b: u32) -> Complex64 {
        if a == 0 && b == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let key = (p.pow(a), p.pow(b));
        if let Some(v) = self.cache.read().unwrap().get(&key) {
            return *v;
        }
        let v = if self.params.is_trivial() {
            schur_tableaux(a + b, a, &[Complex64::new(1.0, 0.0); 3])
        } else {
            schur(a + b, a, &self.satake(p))
        };
        self.cache.write().unwrap().entry(key).or_insert(v);
        v
    }

    /// λ(n₁, n₂), assembled over primes.
    pub fn coeff(&self, n1: u64, n2: u64) -> Complex64 {
        assert!(n1 >= 1 && n2 >= 1, "coefficients are indexed by positive integers");
        let f1 = factorize(n1);
        let f2 = factorize(n2);
        let mut primes: Vec<u64> = f1.iter().chain(f2.iter()).map(|&(p, _)| p).collect();
        primes.sort_unstable();
        primes.dedup();
        let exp = |f: &[(u64, u32)], p: u64| f.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, k)| k);
        let mut v = Complex64::new(1.0, 0.0);
        for p in primes {
            v *= self.prime_power(p, exp(&f1, p), exp(&f2, p));
        }
        v
    }

    /// λ(n, n₂) for n = 0..=cap (index 0 unused).
    pub fn coeff_row(&self, n2: u64, cap: u64) -> Vec<Complex64> {
        let sieve = PrimeSieve::new(cap);
        let mut out = vec![Complex64::new(0.0, 0.0); cap as usize + 1];
        for n in 1..=cap {
            out[n as usize] = self.coeff_with(&sieve, n, n2);
        }
        out
    }

    /// λ(n₁, n₂) with n₁ factored by the sieve.
    pub fn coeff_with(&self, sieve: &PrimeSieve, n1: u64, n2: u64) -> Complex64 {
        let mut v = Complex64::new(1.0, 0.0);
        let mut m = n1;
        let mut rest = n2;
        while m > 1 {
            let p = sieve.spf(m);
            let mut a = 0;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            let mut b = 0;
            while rest % p == 0 {
                rest /= p;
                b += 1;
            }
            v *= self.prime_power(p, a, b);
        }
        if rest > 1 {
            for (p, b) in factorize(rest) {
                v *= self.prime_power(p, 0, b);
            }
        }
        v
    }

    /// λ(1, n).
    pub fn coeff_1n(&self, n: u64) -> Complex64 {
        self.coeff(1, n)
    }

    /// Σ_{n₁²n₂ ≤ x} |λ(n₁, n₂)|².
    pub fn ramanujan_average(&self, x: f64) -> f64 {
        assert!(x >= 1.0);
        let mut acc = 0.0;
        let mut n1 = 1u64;
        while (n1 * n1) as f64 <= x {
            let top = (x / (n1 * n1) as f64).floor() as u64;
            for n2 in 1..=top {
                acc += self.coeff(n1, n2).norm_sqr();
            }
            n1 += 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisor_d3, gcd};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn primes_upto(n: u64) -> Vec<u64> {
        (2..=n)
            .filter(|&p| factorize(p).len() == 1 && factorize(p)[0].1 == 1)
            .collect()
    }

    #[test]
    fn nu_examples() {
        let p = params_from_nu(c(1.0 / 3.0, 0.0), c(1.0 / 3.0, 0.0)).unwrap();
        for a in p.alpha {
            assert!(a.norm() < 1e-15);
        }
        let p = params_from_nu(c(1.0 / 3.0, 0.1), c(1.0 / 3.0, 0.0)).unwrap();
        assert!((p.alpha[0] + p.alpha[1] + p.alpha[2]).norm() < 1e-15);
        assert!(matches!(
            params_from_nu(c(0.9, 0.0), c(0.9, 0.0)),
            Err(Error::OutOfRange(_))
        ));
        let back = LanglandsParams::from_alpha(p.alpha).unwrap();
        assert!((back.nu1 - p.nu1).norm() < 1e-15 && (back.nu2 - p.nu2).norm() < 1e-15);
    }

    #[test]
    fn coeff_examples() {
        let f = GL3Form::trivial();
        assert_eq!(f.coeff(1, 1), c(1.0, 0.0));
        for p in [2, 3, 5, 7, 97] {
            assert_eq!(f.coeff(1, p), c(3.0, 0.0));
            assert_eq!(f.coeff(p, 1), c(3.0, 0.0));
            assert_eq!(f.coeff(p, p), c(8.0, 0.0));
        }
        assert_eq!(f.coeff_1n(6), c(9.0, 0.0));
        assert_eq!(f.coeff_1n(8), c(10.0, 0.0));
    }

    #[test]
    fn trivial_matches_d3() {
        let f = GL3Form::trivial();
        for n in 1..=3000u64 {
            assert_eq!(f.coeff_1n(n), c(divisor_d3(n) as f64, 0.0));
        }
    }

    #[test]
    fn schur_methods_agree() {
        let x = [c(1.3, 0.2), c(0.7, -0.1), c(1.0 / 0.91, 0.05)];
        for l1 in 0..8 {
            for l2 in 0..=l1 {
                let a = schur_tableaux(l1, l2, &x);
                let b = schur_bialternant(l1, l2, &x);
                assert!((a - b).norm() < 1e-11 * a.norm().max(1.0), "{l1} {l2}");
            }
        }
        // semistandard tableau count for (2,1) in 3 letters
        assert_eq!(schur_tableaux(2, 1, &[c(1.0, 0.0); 3]), c(8.0, 0.0));
    }

    #[test]
    fn hecke_relation() {
        let forms = [
            GL3Form::trivial(),
            GL3Form::new(LanglandsParams::from_real_alpha(0.2, -0.05, -0.15).unwrap()),
            GL3Form::new(params_from_nu(c(1.0 / 3.0, 2.0), c(1.0 / 3.0, -1.5)).unwrap()),
        ];
        for f in &forms {
            for p in primes_upto(100) {
                let lhs = f.coeff(1, p) * f.coeff(1, p);
                let rhs = f.coeff(1, p * p) + f.coeff(p, 1);
                assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0), "p={p}");
            }
        }
    }

    #[test]
    fn sieve_row_matches_pointwise() {
        let f = GL3Form::new(LanglandsParams::from_real_alpha(0.2, -0.15, -0.05).unwrap());
        for n2 in [1u64, 4, 6, 12] {
            let row = f.coeff_row(n2, 500);
            for n in 1..=500u64 {
                assert!((row[n as usize] - f.coeff(n, n2)).norm() < 1e-12, "λ({n}, {n2})");
            }
        }
    }

    #[test]
    fn duality_swaps_indices() {
        let f = GL3Form::new(LanglandsParams::from_real_alpha(0.3, -0.1, -0.2).unwrap());
        let d = f.dual();
        for n1 in 1..30 {
            for n2 in 1..30 {
                assert!((d.coeff(n1, n2) - f.coeff(n2, n1)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn ramanujan_average_examples() {
        let f = GL3Form::trivial();
        assert_eq!(f.ramanujan_average(1.0), 1.0);
        assert_eq!(f.ramanujan_average(4.0), 64.0);
        let s: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&x| f.ramanujan_average(x).ln()).collect();
        assert!(s[1] - s[0] > s[2] - s[1]);
    }

    proptest! {
        #[test]
        fn multiplicative(m1 in 1u64..40, m2 in 1u64..40, n1 in 1u64..40, n2 in 1u64..40) {
            prop_assume!(gcd((m1 * m2) as i64, (n1 * n2) as i64) == 1);
            let t = GL3Form::trivial();
            prop_assert_eq!(t.coeff(m1 * n1, m2 * n2), t.coeff(m1, m2) * t.coeff(n1, n2));
            let f = GL3Form::new(LanglandsParams::from_real_alpha(0.1, 0.15, -0.25).unwrap());
            let lhs = f.coeff(m1 * n1, m2 * n2);
            let rhs = f.coeff(m1, m2) * f.coeff(n1, n2);
            prop_assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }
}
