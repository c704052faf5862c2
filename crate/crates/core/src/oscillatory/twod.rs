//! Two-variable exponential integrals and the second-derivative test.

use super::quad::{integrate, phase_partition, uniform, DEFAULT_MAX_PANELS};
use super::Window;
use crate::error::{Error, Result};
use crate::numeric::e;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x0 < x1 && y0 < y1);
        Rect { x0, x1, y0, y1 }
    }

    fn grid(&self, n: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..=n).flat_map(move |i| {
            (0..=n).map(move |j| {
                (
                    self.x0 + (self.x1 - self.x0) * i as f64 / n as f64,
                    self.y0 + (self.y1 - self.y0) * j as f64 / n as f64,
                )
            })
        })
    }
}

pub trait Amp2: Sync {
    fn value(&self, x: f64, y: f64) -> f64;
    /// ∂²g/∂x∂y
    fn d_xy(&self, x: f64, y: f64) -> f64;
}

pub trait Phase2: Sync {
    fn value(&self, x: f64, y: f64) -> f64;
    fn grad(&self, x: f64, y: f64) -> (f64, f64);
    /// (f_xx, f_xy, f_yy)
    fn hessian(&self, x: f64, y: f64) -> (f64, f64, f64);
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductWindow2 {
    pub gx: Window,
    pub gy: Window,
}

impl Amp2 for ProductWindow2 {
    fn value(&self, x: f64, y: f64) -> f64 {
        let a = self.gx.value(x);
        if a == 0.0 {
            0.0
        } else {
            a * self.gy.value(y)
        }
    }
    fn d_xy(&self, x: f64, y: f64) -> f64 {
        self.gx.deriv(x, 1) * self.gy.deriv(y, 1)
    }
}

/// (A x² + 2B xy + D y²)/2 + lx·x + ly·y + c·(x³ + y³)/6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPhase2 {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub lx: f64,
    pub ly: f64,
    pub cubic: f64,
}

impl QuadraticPhase2 {
    pub fn new(a: f64, b: f64, d: f64) -> Self {
        QuadraticPhase2 {
            a,
            b,
            d,
            lx: 0.0,
            ly: 0.0,
            cubic: 0.0,
        }
    }
}

impl Phase2 for QuadraticPhase2 {
    fn value(&self, x: f64, y: f64) -> f64 {
        0.5 * (self.a * x * x + 2.0 * self.b * x * y + self.d * y * y)
            + self.lx * x
            + self.ly * y
            + self.cubic * (x * x * x + y * y * y) / 6.0
    }
    fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.a * x + self.b * y + self.lx + 0.5 * self.cubic * x * x,
            self.b * x + self.d * y + self.ly + 0.5 * self.cubic * y * y,
        )
    }
    fn hessian(&self, x: f64, y: f64) -> (f64, f64, f64) {
        (self.a + self.cubic * x, self.b, self.d + self.cubic * y)
    }
}

/// Nested adaptive quadrature of ∬ h(x, y) dy dx with phase-aware partitions.
fn nested<H, FX, FY>(h: H, rect: &Rect, fx: FX, fy: FY, tol: f64) -> Result<Complex64>
where
    H: Fn(f64, f64) -> Complex64 + Sync,
    FX: Fn(f64) -> f64,
    FY: Fn(f64, f64) -> f64 + Sync,
{
    let inner_tol = tol / (10.0 * (rect.x1 - rect.x0));
    let outer_breaks = phase_partition(fx, rect.x0, rect.x1, 0.5);
    let inner = |x: f64| -> Complex64 {
        let breaks = phase_partition(|y| fy(x, y), rect.y0, rect.y1, 0.5);
        match integrate(|y| h(x, y), &breaks, inner_tol, DEFAULT_MAX_PANELS) {
            Ok(r) => r.value,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let r = integrate(inner, &outer_breaks, tol, DEFAULT_MAX_PANELS)?;
    if !r.value.re.is_finite() {
        return Err(Error::NoConvergence {
            err: f64::INFINITY,
            tol: inner_tol,
        });
    }
    Ok(r.value)
}

/// ∬_rect g e(f) dy dx.
pub fn oracle_2d(g: &dyn Amp2, f: &dyn Phase2, rect: &Rect, tol: f64) -> Result<Complex64> {
    let ys: Vec<f64> = uniform(rect.y0, rect.y1, 8);
    nested(
        |x, y| {
            let v = g.value(x, y);
            if v == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                e(f.value(x, y)) * v
            }
        },
        rect,
        |x| ys.iter().map(|&y| f.grad(x, y).0.abs()).fold(0.0, f64::max),
        |x, y| f.grad(x, y).1,
        tol,
    )
}

/// var(g) = ∬ |∂²g/∂x∂y|.
pub fn variation_2d(g: &dyn Amp2, rect: &Rect) -> Result<f64> {
    Ok(nested(
        |x, y| Complex64::new(g.d_xy(x, y).abs(), 0.0),
        rect,
        |_| 0.0,
        |_, _| 0.0,
        1e-10,
    )?
    .re)
}

/// var(g)/(r₁r₂) after checking f_xx ≥ r₁², f_yy ≥ r₂², det ≥ r₁²r₂² on a grid.
pub fn second_derivative_2d(g: &dyn Amp2, f: &dyn Phase2, rect: &Rect, r1: f64, r2: f64) -> Result<f64> {
    let (s1, s2) = (r1 * r1, r2 * r2);
    for (x, y) in rect.grid(40) {
        let (fxx, fxy, fyy) = f.hessian(x, y);
        if fxx < s1 {
            return Err(Error::HessianConditionFailed(format!(
                "f_xx({x}, {y}) = {fxx} < r₁² = {s1}"
            )));
        }
        if fyy < s2 {
            return Err(Error::HessianConditionFailed(format!(
                "f_yy({x}, {y}) = {fyy} < r₂² = {s2}"
            )));
        }
        let det = fxx * fyy - fxy * fxy;
        if det < s1 * s2 * (1.0 - 1e-12) {
            return Err(Error::HessianConditionFailed(format!("det({x}, {y}) = {det} < r₁²r₂²")));
        }
    }
    for i in 0..=40 {
        let u = i as f64 / 40.0;
        let x = rect.x0 + (rect.x1 - rect.x0) * u;
        let y = rect.y0 + (rect.y1 - rect.y0) * u;
        for v in [
            g.value(x, rect.y0),
            g.value(x, rect.y1),
            g.value(rect.x0, y),
            g.value(rect.x1, y),
        ] {
            if v.abs() > 1e-12 {
                return Err(Error::PreconditionViolated("g does not vanish on the boundary".into()));
            }
        }
    }
    Ok(variation_2d(g, rect)? / (r1 * r2))
}
