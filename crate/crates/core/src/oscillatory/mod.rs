//! Oscillatory integrals ∫ g(x) e(f(x)) dx: a quadrature oracle, the
//! stationary-phase bounds and expansion, a two-variable second-derivative
//! test, and the transform W†(r, s).

pub mod corpus;
pub mod dagger;
pub mod jet;
pub mod quad;
pub mod stationary;
pub mod twod;
pub mod window;

pub use dagger::{mellin, w_dagger, w_dagger_asymptotic, w_dagger_tol};
pub use jet::{Jet, Real};
pub use stationary::{find_stationary_point, sp_bound_first, sp_expand};
pub use twod::{oracle_2d, second_derivative_2d, Amp2, Phase2, ProductWindow2, QuadraticPhase2, Rect};
pub use window::{Shape, Window};

use crate::error::{Error, Result};
use crate::numeric::e;
use num_complex::Complex64;
use quad::{integrate, phase_partition, QuadResult, DEFAULT_MAX_PANELS};
use std::sync::Arc;

/// Exponent slack used wherever a bound carries t^ε or B^ε.
pub const EPS_FIXED: f64 = 0.01;

/// A real phase with an exact derivative oracle.
pub trait Phase: Send + Sync + std::fmt::Debug {
    fn value(&self, x: f64) -> f64;
    fn jet(&self, x: f64) -> Jet;
    fn d1(&self, x: f64) -> f64 {
        self.jet(x).c[1]
    }
}

/// Σ c_k (x − center)^k.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPhase {
    pub coeffs: Vec<f64>,
    pub center: f64,
}

impl PolyPhase {
    pub fn new(coeffs: Vec<f64>, center: f64) -> Self {
        PolyPhase { coeffs, center }
    }

    /// B·x.
    pub fn linear(b: f64) -> Self {
        PolyPhase::new(vec![0.0, b], 0.0)
    }

    /// B·(x − c)².
    pub fn quadratic(b: f64, c: f64) -> Self {
        PolyPhase::new(vec![0.0, 0.0, b], c)
    }

    fn eval<R: Real>(&self, x: R) -> R {
        let u = x - self.center;
        let mut acc = R::cst(0.0) * x;
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    pub fn negated(&self) -> Self {
        PolyPhase::new(self.coeffs.iter().map(|c| -c).collect(), self.center)
    }
}

impl Phase for PolyPhase {
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn jet(&self, x: f64) -> Jet {
        self.eval(Jet::variable(x))
    }
    fn d1(&self, x: f64) -> f64 {
        let u = x - self.center;
        let mut acc = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * u + k as f64 * c;
        }
        acc
    }
}

/// c₀ + c₁x + c_log·ln x, defined for x > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinLogPhase {
    pub c0: f64,
    pub c1: f64,
    pub c_log: f64,
}

impl LinLogPhase {
    fn eval<R: Real>(&self, x: R) -> R {
        x * self.c1 + x.ln() * self.c_log + self.c0
    }
}

impl Phase for LinLogPhase {
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn jet(&self, x: f64) -> Jet {
        self.eval(Jet::variable(x))
    }
    fn d1(&self, x: f64) -> f64 {
        self.c1 + self.c_log / x
    }
}

/// ∫_a^b g(x) e(f(x)) dx with the parameters of the stationary-phase lemmas.
#[derive(Debug, Clone)]
pub struct OscIntegralSpec {
    pub phase: Arc<dyn Phase>,
    pub g: Window,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub omega_f: f64,
    pub omega_g: f64,
    pub lambda: Option<f64>,
    pub kappa: Option<f64>,
}

impl OscIntegralSpec {
    /// Spec over the support of g with unit parameters.
    pub fn new(phase: Arc<dyn Phase>, g: Window) -> Self {
        let (a, b) = g.support();
        OscIntegralSpec {
            phase,
            g,
            a,
            b,
            theta: 1.0,
            omega_f: 1.0,
            omega_g: 1.0,
            lambda: None,
            kappa: None,
        }
    }

    pub fn with_params(mut self, theta: f64, omega_f: f64, omega_g: f64) -> Self {
        self.theta = theta;
        self.omega_f = omega_f;
        self.omega_g = omega_g;
        self
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Self {
        self.a = a;
        self.b = b;
        self
    }

    pub fn with_lambda(mut self, l: f64) -> Self {
        self.lambda = Some(l);
        self
    }

    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        (0..=n).map(move |i| self.a + (self.b - self.a) * i as f64 / n as f64)
    }

    /// Checks Ω_f ≥ b − a and the derivative scalings with constant `c`.
    pub fn validate(&self, c: f64) -> Result<()> {
        if self.omega_f < self.b - self.a {
            return Err(Error::PreconditionViolated(format!(
                "Ω_f = {} below the interval length {}",
                self.omega_f,
                self.b - self.a
            )));
        }
        for x in self.grid(1000) {
            let fj = self.phase.jet(x);
            for i in 2..=4 {
                let lim = c * self.theta / self.omega_f.powi(i as i32);
                if fj.deriv(i).abs() > lim {
                    return Err(Error::PreconditionViolated(format!("|f^({i})({x})| exceeds C·Θ/Ω^{i}")));
                }
            }
            let gj = self.g.jet(x);
            for j in 0..=2 {
                if gj.deriv(j).abs() > c / self.omega_g.powi(j as i32) {
                    return Err(Error::PreconditionViolated(format!("|g^({j})({x})| exceeds C/Ω_g^{j}")));
                }
            }
        }
        Ok(())
    }

    pub fn negated(&self) -> Self {
        #[derive(Debug)]
        struct Neg(Arc<dyn Phase>);
        impl Phase for Neg {
            fn value(&self, x: f64) -> f64 {
                -self.0.value(x)
            }
            fn jet(&self, x: f64) -> Jet {
                -self.0.jet(x)
            }
            fn d1(&self, x: f64) -> f64 {
                -self.0.d1(x)
            }
        }
        let mut s = self.clone();
        s.phase = Arc::new(Neg(self.phase.clone()));
        s
    }
}

/// Adaptive quadrature of amp(x)·e(phase(x)) over [a, b].
pub fn osc_integral<A, F, D>(amp: A, phase: F, dphase: D, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    A: Fn(f64) -> f64 + Sync,
    F: Fn(f64) -> f64 + Sync,
    D: Fn(f64) -> f64,
{
    if b <= a {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            err: 0.0,
            panels: 0,
        });
    }
    let breaks = phase_partition(dphase, a, b, 0.5);
    integrate(
        |x| {
            let g = amp(x);
            if g == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                e(phase(x)) * g
            }
        },
        &breaks,
        tol,
        DEFAULT_MAX_PANELS,
    )
}

/// ∫ g e(f) over the spec's domain to absolute tolerance `tol`.
pub fn quad_osc(spec: &OscIntegralSpec, tol: f64) -> Result<Complex64> {
    if !(tol >= 1e-12) {
        return Err(Error::InvalidInput(format!("tol must be at least 1e-12, got {tol}")));
    }
    quad_osc_unchecked(spec, tol)
}

pub(crate) fn quad_osc_unchecked(spec: &OscIntegralSpec, tol: f64) -> Result<Complex64> {
    let (ga, gb) = spec.g.support();
    let a = spec.a.max(ga);
    let b = spec.b.min(gb);
    let f = &spec.phase;
    Ok(osc_integral(|x| spec.g.value(x), |x| f.value(x), |x| f.d1(x), a, b, tol)?.value)
}

/// B^{−j+ε} after checking |f'| ≥ B and |f^{(k)}| ≤ B^{1+ε} on the support.
pub fn nonstationary_decay(spec: &OscIntegralSpec, big_b: f64, j: u32) -> Result<f64> {
    if big_b <= 0.0 || j == 0 {
        return Err(Error::InvalidInput("need B > 0 and j ≥ 1".into()));
    }
    let (ga, gb) = spec.g.support();
    let (a, b) = (spec.a.max(ga), spec.b.min(gb));
    let cap = big_b.powf(1.0 + EPS_FIXED);
    for i in 0..=2000 {
        let x = a + (b - a) * i as f64 / 2000.0;
        let d = spec.phase.jet(x).derivs();
        if d[1].abs() < big_b {
            return Err(Error::PreconditionViolated(format!(
                "|f'({x})| = {} below B = {big_b}",
                d[1].abs()
            )));
        }
        for (k, dk) in d.iter().enumerate().skip(2).take(j as usize) {
            if dk.abs() > cap {
                return Err(Error::PreconditionViolated(format!("|f^({k})({x})| above B^(1+ε)")));
            }
        }
    }
    Ok(big_b.powf(-(j as f64) + EPS_FIXED))
}
