//! Small numeric helpers shared across modules.

use num_complex::Complex64;
use std::f64::consts::PI;

pub const TAU: f64 = 2.0 * PI;

/// e(x) = exp(2πix), with x reduced to [-1/2, 1/2] first.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// e(p/q) for integers, reduced exactly before the float division.
#[inline]
pub fn e_frac(p: i64, q: u64) -> Complex64 {
    let r = p.rem_euclid(q as i64) as f64 / q as f64;
    e(r)
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

impl std::iter::FromIterator<Complex64> for CSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(it: I) -> Self {
        let mut s = CSum::new();
        for z in it {
            s.add(z);
        }
        s
    }
}

/// Compensated real sum.
pub fn fsum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for x in it {
        neumaier(&mut s, &mut c, x);
    }
    s + c
}

/// Double-double real: hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e1) = two_sum(self.hi, o.hi);
        let (t, e2) = two_sum(self.lo, o.lo);
        let (s, e) = two_sum(s, e1 + t);
        let (hi, lo) = two_sum(s, e + e2);
        Dd { hi, lo }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Working precision of the extended-precision accumulation paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// plain f64, about 16 digits
    Double,
    /// double-double, about 31 digits
    DoubleDouble,
}

impl Precision {
    pub fn from_digits(digits: u32) -> Self {
        if digits <= 16 {
            Precision::Double
        } else {
            Precision::DoubleDouble
        }
    }

    pub fn digits(self) -> u32 {
        match self {
            Precision::Double => 16,
            Precision::DoubleDouble => 31,
        }
    }
}

/// Least-squares slope of y against x.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
