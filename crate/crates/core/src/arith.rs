//! Modular arithmetic, Kloosterman and Ramanujan sums, and the composite
//! character sum built from two Kloosterman sums.

use crate::error::{Error, Result};
use crate::numeric::{e_frac, CSum};
use num_complex::Complex64;
use num_integer::Integer;

/// Largest modulus accepted by the Kloosterman enumeration.
pub const KLOOSTERMAN_MAX_MODULUS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModPair {
    pub residue: u64,
    pub modulus: u64,
}

impl ModPair {
    pub fn new(residue: i64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        ModPair {
            residue: residue.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }
}

pub fn gcd(a: i64, b: i64) -> u64 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

/// Least nonnegative x with a·x ≡ 1 (mod q).
pub fn mod_inverse(a: i64, q: u64) -> Result<ModPair> {
    if q == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let m = q as i128;
    let (mut r0, mut r1) = ((a as i128).rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 && q != 1 {
        return Err(Error::NonInvertible { a, q });
    }
    Ok(ModPair {
        residue: s0.rem_euclid(m) as u64,
        modulus: q,
    })
}

/// The unique a in (Q, q+Q] with a·m ≡ 1 (mod q).
pub fn inverse_in_range(m: i64, q: u64, big_q: f64) -> Result<i64> {
    if !big_q.is_finite() {
        return Err(Error::InvalidInput("Q must be finite".into()));
    }
    let x = mod_inverse(m, q)?.residue as i64;
    let qi = q as i64;
    let mut a = x + qi * (((big_q - x as f64) / q as f64).floor() as i64 + 1);
    // guard against rounding in the floor at exact multiples
    while (a as f64) <= big_q {
        a += qi;
    }
    while (a - qi) as f64 > big_q {
        a -= qi;
    }
    Ok(a)
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, k) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, k)| k as u64 + 1).product()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Number of ordered triples (a, b, c) with abc = n.
pub fn divisor_d3(n: u64) -> u64 {
    assert!(n >= 1);
    factorize(n)
        .iter()
        .map(|&(_, k)| {
            let k = k as u64;
            (k + 1) * (k + 2) / 2
        })
        .product()
}

/// Inverse table and roots of unity for one modulus.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    c: u64,
    units: Vec<(u64, u64)>,
    roots: Vec<Complex64>,
}

impl KloostermanTable {
    pub fn new(c: u64) -> Self {
        assert!(c >= 1 && c <= KLOOSTERMAN_MAX_MODULUS, "modulus {c} outside [1, 10^6]");
        let mut units = Vec::new();
        for alpha in 0..c {
            if let Ok(inv) = mod_inverse(alpha as i64, c) {
                units.push((alpha, inv.residue));
            }
        }
        let roots = (0..c).map(|k| e_frac(k as i64, c)).collect();
        KloostermanTable { c, units, roots }
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// S(a, b; c).
    pub fn sum(&self, a: i64, b: i64) -> f64 {
        let c = self.c as i64;
        let a = a.rem_euclid(c) as u64;
        let b = b.rem_euclid(c) as u64;
        let mut acc = CSum::new();
        for &(alpha, inv) in &self.units {
            let k = (a * alpha + b * inv) % self.c;
            acc.add(self.roots[k as usize]);
        }
        let z = acc.value();
        assert!(
            z.im.abs() < 1e-9 * self.c as f64,
            "Kloosterman sum has imaginary residue {}",
            z.im
        );
        z.re
    }

    /// S(a, β; c) for β = 0..c.
    pub fn row(&self, a: i64) -> Vec<f64> {
        (0..self.c as i64).map(|b| self.sum(a, b)).collect()
    }
}

/// S(a, b; c) = Σ*_{α mod c} e((aα + bᾱ)/c).
pub fn kloosterman(a: i64, b: i64, c: u64) -> f64 {
    KloostermanTable::new(c).sum(a, b)
}

/// d(c)·√c·√gcd(a, b, c).
pub fn weil_bound(a: i64, b: i64, c: u64) -> f64 {
    let g = gcd(gcd(a, b) as i64, c as i64);
    divisor_count(c) as f64 * (c as f64).sqrt() * (g as f64).sqrt()
}

/// c_q(n) = Σ_{d | (q, n)} d·μ(q/d).
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    assert!(q >= 1);
    let g = gcd(q as i64, n);
    divisors(g).into_iter().map(|d| d as i64 * mobius(q / d)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharSumParams {
    pub m: i64,
    pub m_prime: i64,
    pub q_hat: u64,
    pub q_hat_prime: u64,
    pub n2: i64,
}

impl CharSumParams {
    pub fn validate(&self) -> Result<()> {
        if self.q_hat == 0 || self.q_hat_prime == 0 {
            return Err(Error::InvalidInput("moduli must be positive".into()));
        }
        if gcd(self.m, self.q_hat as i64) != 1 || gcd(self.m_prime, self.q_hat_prime as i64) != 1 {
            return Err(Error::InvalidInput(format!(
                "need gcd(m, q̂) = gcd(m', q̂') = 1, got m={} q̂={} m'={} q̂'={}",
                self.m, self.q_hat, self.m_prime, self.q_hat_prime
            )));
        }
        Ok(())
    }

    /// q̂·q̂′·gcd(q̂, q̂′, n₂).
    pub fn bound(&self) -> f64 {
        let g = gcd(gcd(self.q_hat as i64, self.q_hat_prime as i64) as i64, self.n2);
        (self.q_hat * self.q_hat_prime) as f64 * g as f64
    }
}

/// Row β ↦ S(m̄, β; q) for β mod q.
pub fn char_sum_row(m: i64, q: u64) -> Result<Vec<f64>> {
    let mbar = mod_inverse(m, q)?.residue as i64;
    Ok(KloostermanTable::new(q).row(mbar))
}

/// 𝔠 from precomputed rows of S(m̄, ·; q̂) and S(m̄′, ·; q̂′).
pub fn char_sum_from_rows(row: &[f64], row_prime: &[f64], n2: i64) -> Complex64 {
    let q1 = row.len() as u64;
    let q2 = row_prime.len() as u64;
    let modulus = q1 * q2;
    let mut acc = CSum::new();
    for beta in 0..modulus {
        let w = row[(beta % q1) as usize] * row_prime[(beta % q2) as usize];
        if w != 0.0 {
            acc.add(e_frac(beta as i64 * n2, modulus) * w);
        }
    }
    acc.value()
}

/// 𝔠 = Σ_{β mod q̂q̂′} S(m̄, β; q̂) S(m̄′, β; q̂′) e(βn₂/(q̂q̂′)).
pub fn char_sum(p: &CharSumParams) -> Result<Complex64> {
    p.validate()?;
    let r1 = char_sum_row(p.m, p.q_hat)?;
    let r2 = char_sum_row(p.m_prime, p.q_hat_prime)?;
    Ok(char_sum_from_rows(&r1, &r2, p.n2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 7).unwrap().residue, 1);
        assert_eq!(mod_inverse(3, 7).unwrap().residue, 5);
        assert_eq!(mod_inverse(2, 4), Err(Error::NonInvertible { a: 2, q: 4 }));
        assert_eq!(mod_inverse(-1, 5).unwrap().residue, 4);
        assert_eq!(mod_inverse(5, 1).unwrap().residue, 0);
    }

    #[test]
    fn inverse_in_range_examples() {
        assert_eq!(inverse_in_range(1, 1, 5.0).unwrap(), 6);
        assert_eq!(inverse_in_range(3, 7, 10.0).unwrap(), 12);
        assert!(inverse_in_range(2, 4, 3.0).is_err());
        // exact integer Q is excluded from the range
        assert_eq!(inverse_in_range(1, 5, 6.0).unwrap(), 11);
    }

    #[test]
    fn kloosterman_examples() {
        assert_eq!(kloosterman(1, 1, 1), 1.0);
        assert!((kloosterman(1, 1, 3) + 1.0).abs() < 1e-12);
        assert!((kloosterman(1, 2, 5) + 1.0 + 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan_sum(1, 17), 1);
        assert_eq!(ramanujan_sum(2, 1), -1);
        assert_eq!(ramanujan_sum(6, 4), -1);
        assert_eq!(ramanujan_sum(6, 0), euler_phi(6) as i64);
    }

    #[test]
    fn d3_examples() {
        assert_eq!(divisor_d3(1), 1);
        assert_eq!(divisor_d3(4), 6);
        assert_eq!(divisor_d3(12), 18);
        for n in 1..200u64 {
            let mut count = 0;
            for a in divisors(n) {
                count += divisors(n / a).len() as u64;
            }
            assert_eq!(divisor_d3(n), count);
        }
    }

    #[test]
    fn ramanujan_matches_kloosterman() {
        for q in 1..=60u64 {
            let t = KloostermanTable::new(q);
            for n in -60..=60i64 {
                let k = t.sum(n, 0);
                assert!((k - ramanujan_sum(q, n) as f64).abs() < 1e-9, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn char_sum_examples() {
        let p = CharSumParams {
            m: 1,
            m_prime: 1,
            q_hat: 1,
            q_hat_prime: 1,
            n2: 0,
        };
        assert!((char_sum(&p).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let p = CharSumParams {
            m: 1,
            m_prime: 1,
            q_hat: 2,
            q_hat_prime: 3,
            n2: 0,
        };
        assert!(char_sum(&p).unwrap().norm() < 1e-12);
        let p = CharSumParams {
            m: 1,
            m_prime: 1,
            q_hat: 2,
            q_hat_prime: 2,
            n2: 1,
        };
        let c = char_sum(&p).unwrap();
        // brute force over β mod 4
        let mut brute = Complex64::new(0.0, 0.0);
        for beta in 0..4 {
            brute += kloosterman(1, beta, 2) * kloosterman(1, beta, 2) * e_frac(beta, 4);
        }
        assert!((c - brute).norm() < 1e-12);
        assert!(c.norm() <= p.bound() + 1e-9);
        let bad = CharSumParams {
            m: 2,
            m_prime: 1,
            q_hat: 4,
            q_hat_prime: 3,
            n2: 1,
        };
        assert!(matches!(char_sum(&bad), Err(Error::InvalidInput(_))));
    }

    proptest! {
        #[test]
        fn kloosterman_symmetric(a in -50i64..50, b in -50i64..50, c in 1u64..200) {
            let t = KloostermanTable::new(c);
            prop_assert!((t.sum(a, b) - t.sum(b, a)).abs() < 1e-9);
        }

        #[test]
        fn weil_holds(a in 1i64..10_000, b in -10_000i64..10_000, c in 1u64..2000) {
            prop_assume!(gcd(a, c as i64) == 1);
            prop_assert!(kloosterman(a, b, c).abs() <= weil_bound(a, b, c) + 1e-9);
        }

        #[test]
        fn ramanujan_multiplicative(q1 in 1u64..60, q2 in 1u64..60, n in -300i64..300) {
            prop_assume!(gcd(q1 as i64, q2 as i64) == 1);
            prop_assert_eq!(ramanujan_sum(q1 * q2, n), ramanujan_sum(q1, n) * ramanujan_sum(q2, n));
        }

        #[test]
        fn inverse_in_range_is_unique(m in -500i64..500, q in 1u64..300, big_q in 0.0f64..50.0) {
            prop_assume!(gcd(m, q as i64) == 1);
            let a = inverse_in_range(m, q, big_q).unwrap();
            prop_assert!(a as f64 > big_q && a as f64 <= q as f64 + big_q);
            prop_assert_eq!((a as i128 * m as i128).rem_euclid(q as i128), 1 % q as i128);
        }
    }
}
