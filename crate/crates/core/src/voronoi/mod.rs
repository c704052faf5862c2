//! GL(3) Voronoi summation: gamma factors, the transform G_±, and both sides
//! of the identity
//!
//!   Σ λ(1,n) e(an/q) g(n) = Res + q Σ_± Σ_{n₁|q} Σ_{n₂} λ(n₂,n₁)/(n₁n₂) S(ā, ±n₂; q/n₁) G_±(n₁²n₂/q³).
//!
//! The residue term vanishes for cusp forms; for the Satake model used here
//! (α = 0 is ζ³) it is the polar part of the twisted Dirichlet series.
//! For α ≠ 0 the normalization is best-effort.

pub mod contour;
pub mod gamma;
pub mod nufft;
pub mod polar;

pub use contour::{big_g, ContourSpec, GTransform, GValue};
pub use gamma::{gamma_ell, gamma_pm, phi_pm, GammaFactorSpec, Sign};
pub use polar::{polar_term, twisted_series};

use crate::arith::{divisors, gcd, mod_inverse, KloostermanTable};
use crate::error::{Error, Result};
use crate::gl3form::{GL3Form, PrimeSieve};
use crate::numeric::{e_frac, CSum};
use crate::oscillatory::Window;
use num_complex::Complex64;

/// Σ_n λ(1,n) e(an/q) g(n) over the integers in supp g.
pub fn voronoi_lhs(form: &GL3Form, a: i64, q: u64, g: &Window) -> Result<Complex64> {
    check_coprime(a, q)?;
    let (lo, hi) = g.support();
    let first = lo.floor().max(0.0) as u64 + 1;
    let last = hi.ceil() as u64;
    let mut acc = CSum::new();
    for n in first..last.max(first) {
        let w = g.value(n as f64);
        if w != 0.0 {
            acc.add(form.coeff_1n(n) * e_frac(a * n as i64, q) * w);
        }
    }
    Ok(acc.value())
}

/// Parameters fed to γ_ℓ in the identity. The coefficients here follow
/// L(s) = Π ζ(s+αᵢ), whose functional equation carries Γ((s−αᵢ)/2)-type
/// factors, so the identity wants −α in γ_ℓ. Checked numerically for real α.
pub fn gamma_alpha(form: &GL3Form) -> [Complex64; 3] {
    form.params.alpha.map(|a| -a)
}

fn check_coprime(a: i64, q: u64) -> Result<()> {
    if q == 0 || gcd(a, q as i64) != 1 {
        return Err(Error::InvalidInput(format!(
            "need gcd(a, q) = 1 with q ≥ 1, got a={a}, q={q}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiRhs {
    pub dual: Complex64,
    pub polar: Complex64,
    pub total: Complex64,
    /// Heuristic bound on the dropped terms n₂ > cap.
    pub truncation: f64,
    /// (n₁, n₂ cap) pairs actually summed.
    pub caps: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapRule {
    /// n₂ ≤ cap for every n₁.
    Uniform(u64),
    /// Per-n₁ caps from the decay envelope of |G_±|.
    Auto,
}

/// Largest n₂ range the engine will sieve.
pub const MAX_N2_CAP: u64 = 50_000_000;

/// Σ_{n₂ ≡ r (c)} λ(n₂,n₁)/(n₁n₂) G(n₁²n₂/q³) for r mod c = q/n₁.
struct ResidueSums {
    n1: u64,
    sums: Vec<Complex64>,
    tail: f64,
    cap: u64,
}

/// |G(y)| with the roundoff level and the contour truncation removed.
fn signal(t: &GTransform, ys: &[f64]) -> Vec<f64> {
    t.eval_many(ys)
        .iter()
        .zip(ys)
        .map(|(v, &y)| (v.norm() - t.noise(y) - t.tail(y)).max(0.0))
        .collect()
}

/// Shared state for many (a, q): both G-transforms and their decay envelopes.
#[derive(Debug)]
pub struct VoronoiEngine {
    pub form: GL3Form,
    pub g: Window,
    pub tol: f64,
    transforms: [GTransform; 2],
    /// (y, max_{y' ≥ y} max_± |G_±(y')|) on a geometric grid
    envelope: Vec<(f64, f64)>,
}

impl VoronoiEngine {
    /// `tol` is the absolute accuracy target for the right-hand side.
    pub fn new(form: &GL3Form, g: &Window, contour: &ContourSpec, tol: f64) -> Result<Self> {
        let g_tol = 1e-5 * tol;
        let mut ts = Vec::new();
        for sign in Sign::both() {
            let spec = GammaFactorSpec {
                alpha: gamma_alpha(form),
                ell: 0,
                sign,
            };
            ts.push(GTransform::new(&spec, g, contour, g_tol)?.with_plan());
        }
        let transforms: [GTransform; 2] = [ts.remove(0), ts.remove(0)];
        let ys: Vec<f64> = (0..=500).map(|i| 1e-4 * 10f64.powf(i as f64 / 50.0)).collect();
        let mut envelope = vec![(0.0, 0.0); ys.len()];
        let vals: Vec<Vec<f64>> = transforms.iter().map(|t| signal(t, &ys)).collect();
        let mut run: f64 = 0.0;
        for i in (0..ys.len()).rev() {
            run = run.max(vals[0][i]).max(vals[1][i]);
            envelope[i] = (ys[i], run);
        }
        Ok(VoronoiEngine {
            form: form.clone(),
            g: g.clone(),
            tol,
            transforms,
            envelope,
        })
    }

    fn transform(&self, sign: Sign) -> &GTransform {
        match sign {
            Sign::Plus => &self.transforms[0],
            Sign::Minus => &self.transforms[1],
        }
    }

    /// (y, max_{y' ≥ y} max_± |G_±(y')|) on the grid the caps are chosen from.
    pub fn envelope(&self) -> &[(f64, f64)] {
        &self.envelope
    }

    /// max_{y' ≥ y} |G_±(y')| read off the envelope grid.
    fn envelope_at(&self, y: f64) -> f64 {
        self.envelope.iter().find(|(yg, _)| *yg >= y).map_or(0.0, |(_, m)| *m)
    }

    /// Geometric-tail heuristic for the terms n₂ > cap: |G| at the cap, summed
    /// over doublings with the observed decay ratio, times a safety factor 10.
    fn tail_heuristic(q: u64, n1: u64, lam_avg: f64, g_cap: f64, rho: f64) -> f64 {
        let c = (q / n1) as f64;
        10.0 * q as f64 * c * lam_avg * (2f64.ln() / n1 as f64) * g_cap / (1.0 - rho.min(0.95))
    }

    /// Smallest n₂ cap whose predicted heuristic tail fits this pair's share of tol.
    fn auto_cap(&self, q: u64, n1: u64) -> u64 {
        let pairs = 2.0 * divisors(q).len() as f64;
        let scale = (n1 * n1) as f64 / (q * q * q) as f64;
        for &(y, env) in &self.envelope {
            let n2 = y / scale;
            if n2 < 16.0 {
                continue;
            }
            let next = self.envelope_at(2.0 * y);
            let rho = if env > 0.0 { next / env } else { 0.0 };
            let lam = 0.5 * (n2.ln() + 1.0).powi(2) + 1.0;
            if Self::tail_heuristic(q, n1, lam, env, rho) * pairs < 0.25 * self.tol {
                return n2.ceil() as u64;
            }
        }
        u64::MAX
    }

    fn residue_sums(&self, sign: Sign, q: u64, n1: u64, cap: u64, sieve: &PrimeSieve) -> ResidueSums {
        const CHUNK: u64 = 1 << 16;
        let c = q / n1;
        let scale = (n1 * n1) as f64 / (q * q * q) as f64;
        let t = self.transform(sign);
        let mut acc = vec![CSum::new(); c as usize];
        let mut contour_err = 0.0;
        let mut lam_recent = 0.0;
        let recent = cap.min(200);
        let mut start = 1;
        while start <= cap {
            let end = (start + CHUNK - 1).min(cap);
            let ys: Vec<f64> = (start..=end).map(|n2| scale * n2 as f64).collect();
            let gs = t.eval_many(&ys);
            for (n2, (gv, y)) in (start..=end).zip(gs.iter().zip(&ys)) {
                let lam = self.form.coeff_with(sieve, n2, n1);
                let w = 1.0 / (n1 * n2) as f64;
                acc[(n2 % c) as usize].add(lam * *gv * w);
                contour_err += lam.norm() * w * (t.tail(*y) + t.noise(*y));
                if n2 + recent > cap {
                    lam_recent += lam.norm();
                }
            }
            start = end + 1;
        }
        let y_cap = scale * cap as f64;
        let probe = |lo: f64| -> f64 {
            let pts: Vec<f64> = (0..32).map(|i| lo * 2f64.powf(i as f64 / 31.0)).collect();
            signal(t, &pts).into_iter().fold(0.0, f64::max)
        };
        let g_before = probe(y_cap / 2.0);
        let g_after = probe(y_cap);
        let rho = if g_before > 0.0 { g_after / g_before } else { 0.0 };
        let tail =
            Self::tail_heuristic(q, n1, lam_recent / recent as f64, g_after, rho) + q as f64 * c as f64 * contour_err;
        ResidueSums {
            n1,
            sums: acc.iter().map(|s| s.value()).collect(),
            tail,
            cap,
        }
    }

    fn sums_with_caps(&self, q: u64, caps: &[(u64, u64)]) -> Result<[Vec<ResidueSums>; 2]> {
        let top = caps.iter().map(|&(_, c)| c).max().unwrap_or(1);
        if top > MAX_N2_CAP {
            return Err(Error::TruncationTooSmall {
                estimate: f64::INFINITY,
                tol: self.tol,
            });
        }
        let sieve = PrimeSieve::new(top);
        Ok(Sign::both().map(|sign| {
            caps.iter()
                .map(|&(n1, cap)| self.residue_sums(sign, q, n1, cap, &sieve))
                .collect()
        }))
    }

    /// Residue sums for every n₁ | q; under `Auto` the caps double until the
    /// truncation estimate fits the tolerance.
    fn all_residue_sums(&self, q: u64, rule: CapRule) -> Result<[Vec<ResidueSums>; 2]> {
        let divs = divisors(q);
        match rule {
            CapRule::Uniform(c) => self.sums_with_caps(q, &divs.iter().map(|&n1| (n1, c)).collect::<Vec<_>>()),
            CapRule::Auto => {
                let mut caps: Vec<(u64, u64)> = divs.iter().map(|&n1| (n1, self.auto_cap(q, n1))).collect();
                let mut best: Option<(f64, [Vec<ResidueSums>; 2])> = None;
                loop {
                    let sums = match self.sums_with_caps(q, &caps) {
                        Ok(s) => s,
                        Err(e) => return best.map(|b| b.1).ok_or(e),
                    };
                    let est: f64 = sums.iter().flatten().map(|r| r.tail).sum();
                    if est <= self.tol {
                        return Ok(sums);
                    }
                    // once the accumulated noise outgrows the tail, larger caps only hurt
                    if best.as_ref().is_some_and(|b| est >= b.0) {
                        return Ok(best.expect("checked").1);
                    }
                    best = Some((est, sums));
                    for c in caps.iter_mut() {
                        c.1 = c.1.saturating_mul(2);
                    }
                }
            }
        }
    }

    /// Right-hand side for several residues a mod q, sharing the n₂ sums.
    pub fn rhs_batch(&self, q: u64, residues: &[i64], rule: CapRule) -> Result<Vec<VoronoiRhs>> {
        for &a in residues {
            check_coprime(a, q)?;
        }
        let sums = self.all_residue_sums(q, rule)?;
        let tables: Vec<KloostermanTable> = divisors(q)
            .into_iter()
            .map(|n1| KloostermanTable::new(q / n1))
            .collect();
        let truncation: f64 = sums.iter().flatten().map(|r| r.tail).sum();
        let caps: Vec<(u64, u64)> = sums[0].iter().map(|r| (r.n1, r.cap)).collect();
        let mut out = Vec::with_capacity(residues.len());
        for &a in residues {
            let abar = mod_inverse(a, q)?.residue as i64;
            let mut acc = CSum::new();
            for (sign, per_sign) in Sign::both().iter().zip(&sums) {
                let sg = sign.as_f64() as i64;
                for (r, table) in per_sign.iter().zip(&tables) {
                    for (res, z) in r.sums.iter().enumerate() {
                        acc.add(*z * table.sum(abar, sg * res as i64));
                    }
                }
            }
            let dual = acc.value() * q as f64;
            let polar = polar_term(&self.form, a, q, &self.g)?;
            if truncation > self.tol {
                return Err(Error::TruncationTooSmall {
                    estimate: truncation,
                    tol: self.tol,
                });
            }
            out.push(VoronoiRhs {
                dual,
                polar,
                total: dual + polar,
                truncation,
                caps: caps.clone(),
            });
        }
        Ok(out)
    }

    pub fn rhs(&self, a: i64, q: u64, rule: CapRule) -> Result<VoronoiRhs> {
        Ok(self.rhs_batch(q, &[a], rule)?.remove(0))
    }
}

/// The dual side with n₂ ≤ n2_cap for every n₁, plus the residue term.
pub fn voronoi_rhs(
    form: &GL3Form,
    a: i64,
    q: u64,
    g: &Window,
    contour: &ContourSpec,
    n2_cap: u64,
    tol: f64,
) -> Result<VoronoiRhs> {
    check_coprime(a, q)?;
    if n2_cap == 0 {
        return Err(Error::InvalidInput("n2_cap must be positive".into()));
    }
    VoronoiEngine::new(form, g, contour, tol)?.rhs(a, q, CapRule::Uniform(n2_cap))
}

/// The bump used for the identity checks: a normalized Kaiser-type bump on [lo, hi].
pub fn test_window(lo: f64, hi: f64) -> Window {
    Window::kaiser_bump(lo, hi, 22.0, 1.0).normalized()
}
