//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature with an initial
//! partition driven by the phase derivative.

use crate::error::{Error, Result};
use crate::numeric::CSum;
use num_complex::Complex64;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

pub const DEFAULT_MAX_PANELS: usize = 400_000;

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub err: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    val: Complex64,
    err: f64,
    floor: f64,
}

impl Panel {
    fn refinable(&self) -> bool {
        self.err > self.floor && (self.b - self.a) > 1e-13 * self.a.abs().max(self.b.abs()).max(1e-300)
    }
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then_with(|| o.a.total_cmp(&self.a))
    }
}

fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = Complex64::new(0.0, 0.0);
    let mut abs = fc.norm() * WGK[10];
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        let s = f1 + f2;
        k += s * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let h_abs = h.abs();
    Panel {
        a,
        b,
        val: k * h,
        err: ((k - g) * h).norm(),
        floor: 50.0 * f64::EPSILON * abs * h_abs,
    }
}

/// ∫ f over [breaks[0], breaks[last]] to absolute tolerance `tol`.
pub fn integrate<F>(f: F, breaks: &[f64], tol: f64, max_panels: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    assert!(breaks.len() >= 2);
    let initial: Vec<Panel> = if breaks.len() > 64 {
        breaks.par_windows(2).map(|w| gk21(&f, w[0], w[1])).collect()
    } else {
        breaks.windows(2).map(|w| gk21(&f, w[0], w[1])).collect()
    };
    let mut done: Vec<Panel> = Vec::new();
    let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
    let mut total_err = 0.0;
    for p in initial {
        total_err += p.err;
        if p.refinable() {
            heap.push(p);
        } else {
            done.push(p);
        }
    }
    let mut count = done.len() + heap.len();
    while total_err > tol {
        if count >= max_panels {
            return Err(Error::NoConvergence { err: total_err, tol });
        }
        let Some(p) = heap.pop() else {
            return Err(Error::NoConvergence { err: total_err, tol });
        };
        let m = 0.5 * (p.a + p.b);
        let l = gk21(&f, p.a, m);
        let r = gk21(&f, m, p.b);
        total_err += l.err + r.err - p.err;
        for q in [l, r] {
            if q.refinable() {
                heap.push(q);
            } else {
                done.push(q);
            }
        }
        count += 1;
        // guard against drift in the running total
        if count % 4096 == 0 {
            total_err = done.iter().chain(heap.iter()).map(|p| p.err).sum();
        }
    }
    done.extend(heap);
    done.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = done.iter().map(|p| p.val).collect::<CSum>().value();
    let err = done.iter().map(|p| p.err).sum();
    Ok(QuadResult {
        value,
        err,
        panels: done.len(),
    })
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let breaks = uniform(a, b, 8);
    Ok(
        integrate(|x| Complex64::new(f(x), 0.0), &breaks, tol, DEFAULT_MAX_PANELS)?
            .value
            .re,
    )
}

pub fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect()
}

/// Breakpoints with at most `cycles` phase cycles per panel, from |f'|.
pub fn phase_partition<D>(fprime: D, a: f64, b: f64, cycles: f64) -> Vec<f64>
where
    D: Fn(f64) -> f64,
{
    let coarse = 256;
    let mut peak: f64 = 0.0;
    for i in 0..=coarse {
        peak = peak.max(fprime(a + (b - a) * i as f64 / coarse as f64).abs());
    }
    let grid = ((4.0 * peak * (b - a) / cycles).ceil() as usize).clamp(64, 4_000_000);
    let h = (b - a) / grid as f64;
    let mut out = vec![a];
    let mut acc = 0.0;
    let mut prev = fprime(a).abs();
    for i in 1..=grid {
        let x = if i == grid { b } else { a + h * i as f64 };
        let cur = fprime(x).abs();
        acc += 0.5 * (prev + cur) * h;
        prev = cur;
        if acc >= cycles && i < grid {
            out.push(x);
            acc = 0.0;
        }
    }
    out.push(b);
    // always at least a handful of panels
    if out.len() < 5 {
        return uniform(a, b, 4);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::TAU;

    #[test]
    fn polynomial_exact() {
        let r = integrate_real(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - (32.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_exponential() {
        // ∫₀¹ e(50x) x dx in closed form
        let w = TAU * 50.0;
        let f = |x: f64| Complex64::new(0.0, w * x).exp() * x;
        let breaks = phase_partition(|_| 50.0, 0.0, 1.0, 0.5);
        let r = integrate(f, &breaks, 1e-13, DEFAULT_MAX_PANELS).unwrap();
        let i = Complex64::i();
        let exact = (Complex64::new(0.0, w).exp() * (1.0 / (i * w) + 1.0 / (w * w)) - 1.0 / (w * w)) * 1.0;
        assert!((r.value - exact).norm() < 1e-12, "{} vs {}", r.value, exact);
    }

    #[test]
    fn reports_no_convergence() {
        let f = |x: f64| Complex64::new((1.0 / x).sin() / x, 0.0);
        let r = integrate(f, &[1e-9, 1.0], 1e-12, 200);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
