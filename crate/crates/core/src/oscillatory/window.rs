//! Smooth compactly supported test functions with exact derivative oracles.

use super::jet::{Jet, Real, ORDER};
use super::quad::integrate_real;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// exp(−s/(1−u²)) on u ∈ (−1, 1)
    Bump { steep: f64 },
    /// (I₀(β√(1−u²)) − 1)·exp(−c/(1−u²)); much faster Fourier decay than the plain bump
    KaiserBump { beta: f64, c: f64 },
    /// smooth steps up on [a, lo] and down on [hi, b], ≡ 1 on [lo, hi]
    Plateau { lo: f64, hi: f64 },
}

#[derive(Debug)]
pub struct Window {
    pub shape: Shape,
    pub a: f64,
    pub b: f64,
    pub scale: f64,
    bounds: OnceLock<Vec<f64>>,
}

impl Clone for Window {
    fn clone(&self) -> Self {
        Window {
            shape: self.shape,
            a: self.a,
            b: self.b,
            scale: self.scale,
            bounds: OnceLock::new(),
        }
    }
}

impl PartialEq for Window {
    fn eq(&self, o: &Self) -> bool {
        self.shape == o.shape && self.a == o.a && self.b == o.b && self.scale == o.scale
    }
}

/// exp(−1/y) for y > 0, with derivatives; zero where it underflows.
fn smooth_f<R: Real>(y: R) -> R {
    let v = y.val();
    if v <= 1.0 / 700.0 {
        R::cst(0.0) * y
    } else {
        (-(y.recip())).exp()
    }
}

/// 0 for y ≤ 0, 1 for y ≥ 1, C^∞ in between.
fn smooth_step<R: Real>(y: R) -> R {
    let v = y.val();
    if v <= 0.0 {
        R::cst(0.0) * y
    } else if v >= 1.0 {
        R::cst(1.0) + R::cst(0.0) * y
    } else {
        let f = smooth_f(y);
        let g = smooth_f(-y + 1.0);
        f / (f + g)
    }
}

impl Window {
    fn with(shape: Shape, a: f64, b: f64) -> Self {
        assert!(a < b, "window support must be a nonempty interval");
        Window {
            shape,
            a,
            b,
            scale: 1.0,
            bounds: OnceLock::new(),
        }
    }

    /// exp(−1/(1−u²)) rescaled to [a, b].
    pub fn bump(a: f64, b: f64) -> Self {
        Self::with(Shape::Bump { steep: 1.0 }, a, b)
    }

    pub fn steep_bump(a: f64, b: f64, steep: f64) -> Self {
        assert!(steep > 0.0);
        Self::with(Shape::Bump { steep }, a, b)
    }

    pub fn kaiser_bump(a: f64, b: f64, beta: f64, c: f64) -> Self {
        assert!(beta > 0.0 && c > 0.0);
        Self::with(Shape::KaiserBump { beta, c }, a, b)
    }

    /// Support [a, b], ≡ 1 on [lo, hi].
    pub fn plateau(a: f64, lo: f64, hi: f64, b: f64) -> Self {
        assert!(a < lo && lo <= hi && hi < b);
        Self::with(Shape::Plateau { lo, hi }, a, b)
    }

    /// The default V: normalized Kaiser bump on [1, 2].
    pub fn v_default() -> Self {
        Self::kaiser_bump(1.0, 2.0, 22.0, 1.0).normalized()
    }

    /// V*: support [1/2, 5/2], ≡ 1 on [1, 2].
    pub fn v_star() -> Self {
        Self::plateau(0.5, 1.0, 2.0, 2.5)
    }

    pub fn with_scale(mut self, s: f64) -> Self {
        self.scale = s;
        self.bounds = OnceLock::new();
        self
    }

    /// Rescaled so that ∫ W = 1.
    pub fn normalized(self) -> Self {
        let s = self.scale / self.integral();
        self.with_scale(s)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn eval<R: Real>(&self, x: R) -> R {
        let xv = x.val();
        if xv <= self.a || xv >= self.b || self.scale == 0.0 {
            return R::cst(0.0) * x;
        }
        let core = match self.shape {
            Shape::Bump { steep } => {
                let u = (x * 2.0 - (self.a + self.b)) / (self.b - self.a);
                let w = -(u * u) + 1.0;
                if steep / w.val() > 700.0 {
                    return R::cst(0.0) * x;
                }
                (-(w.recip() * steep)).exp()
            }
            Shape::KaiserBump { beta, c } => {
                let u = (x * 2.0 - (self.a + self.b)) / (self.b - self.a);
                let w = -(u * u) + 1.0;
                if c / w.val() > 700.0 {
                    return R::cst(0.0) * x;
                }
                let z = w * (beta * beta / 4.0);
                let terms = (1.5 * beta) as usize + 20;
                let mut term = z;
                let mut sum = z;
                for k in 2..=terms {
                    term = term * z / (k * k) as f64;
                    sum = sum + term;
                }
                sum * (-(w.recip() * c)).exp()
            }
            Shape::Plateau { lo, hi } => {
                let up = smooth_step((x - self.a) / (lo - self.a));
                let down = smooth_step((-x + self.b) / (self.b - hi));
                up * down
            }
        };
        core * self.scale
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }

    pub fn jet(&self, x: f64) -> Jet {
        self.eval(Jet::variable(x))
    }

    /// k-th derivative, k ≤ 8.
    pub fn deriv(&self, x: f64, k: usize) -> f64 {
        assert!(k <= ORDER);
        self.jet(x).deriv(k)
    }

    /// Rough size of ∫ |W|, used to turn relative tolerances into absolute ones.
    fn mass_scale(&self) -> f64 {
        let peak = (0..=200)
            .map(|i| self.value(self.a + (self.b - self.a) * i as f64 / 200.0).abs())
            .fold(0.0, f64::max);
        peak * (self.b - self.a)
    }

    pub fn integral(&self) -> f64 {
        self.moment(0)
    }

    /// ∫ W(x) x^k dx.
    pub fn moment(&self, k: i32) -> f64 {
        let tol = 1e-14 * self.mass_scale() * self.a.abs().max(self.b.abs()).powi(k).max(1e-300);
        integrate_real(|x| self.value(x) * x.powi(k), self.a, self.b, tol).expect("window moment")
    }

    /// max |W^{(j)}| over a dense grid, j = 0..=ORDER, with 5% headroom.
    pub fn derivative_bounds(&self) -> &[f64] {
        self.bounds.get_or_init(|| {
            let n = 4000;
            let mut m = vec![0.0f64; ORDER + 1];
            for i in 0..=n {
                let x = self.a + (self.b - self.a) * i as f64 / n as f64;
                let d = self.jet(x).derivs();
                for j in 0..=ORDER {
                    m[j] = m[j].max(d[j].abs());
                }
            }
            m.iter().map(|v| v * 1.05).collect()
        })
    }

    /// ∫ |W'|, the total variation.
    pub fn variation(&self) -> f64 {
        integrate_real(
            |x| self.deriv(x, 1).abs(),
            self.a,
            self.b,
            1e-12 * self.mass_scale() / (self.b - self.a),
        )
        .expect("window variation")
    }
}
