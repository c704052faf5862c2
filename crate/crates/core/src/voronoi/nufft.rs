//! Type-2 nonuniform FFT with Gaussian gridding: f(x) = Σ_{|k|≤K} F_k e^{ikx}
//! at arbitrary real x.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

const OVERSAMPLE: usize = 2;
const SPREAD: i64 = 16;

#[derive(Debug, Clone)]
pub struct Nufft2 {
    grid: Vec<Complex64>,
    tau: f64,
    h: f64,
    /// e^{−(jh)²/4τ} for j = 0..=SPREAD
    e3: Vec<f64>,
}

impl Nufft2 {
    /// `coeffs[j]` is the coefficient of mode j − K, with coeffs.len() = 2K + 1.
    pub fn new(coeffs: &[Complex64]) -> Self {
        assert!(coeffs.len() % 2 == 1, "modes must be symmetric about 0");
        let k = (coeffs.len() / 2) as i64;
        let m = coeffs.len() + 1;
        let r = OVERSAMPLE as f64;
        let tau = PI * SPREAD as f64 / ((m * m) as f64 * r * (r - 0.5));
        let mr = OVERSAMPLE * m;
        let mut grid = vec![Complex64::new(0.0, 0.0); mr];
        let pre = (PI / tau).sqrt();
        for (j, &f) in coeffs.iter().enumerate() {
            let mode = j as i64 - k;
            let idx = mode.rem_euclid(mr as i64) as usize;
            grid[idx] = f * (pre * ((mode * mode) as f64 * tau).exp());
        }
        FftPlanner::new().plan_fft_inverse(mr).process(&mut grid);
        let h = 2.0 * PI / mr as f64;
        let e3 = (0..=SPREAD)
            .map(|j| (-((j as f64 * h).powi(2)) / (4.0 * tau)).exp())
            .collect();
        Nufft2 { grid, tau, h, e3 }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let mr = self.grid.len() as i64;
        let xr = x.rem_euclid(2.0 * PI);
        let m0 = (xr / self.h).floor() as i64;
        let d0 = xr - m0 as f64 * self.h;
        // weight of grid point m0 + j is e^{−(d0 − jh)²/4τ} = E1·E2^j·E3(j)
        let e1 = (-(d0 * d0) / (4.0 * self.tau)).exp();
        let e2 = (d0 * self.h / (2.0 * self.tau)).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = e1;
        for j in 0..SPREAD {
            acc += self.grid[(m0 + j).rem_euclid(mr) as usize] * (p * self.e3[j as usize]);
            p *= e2;
        }
        let mut p = e1 / e2;
        for j in 1..=SPREAD {
            acc += self.grid[(m0 - j).rem_euclid(mr) as usize] * (p * self.e3[j as usize]);
            p /= e2;
        }
        acc / mr as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = 500i64;
        let coeffs: Vec<Complex64> = (-k..=k)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let plan = Nufft2::new(&coeffs);
        let mass: f64 = coeffs.iter().map(|c| c.norm()).sum();
        for _ in 0..50 {
            let x: f64 = rng.gen_range(-100.0..100.0);
            let direct: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| c * Complex64::from_polar(1.0, (j as i64 - k) as f64 * x))
                .sum();
            assert!((plan.eval(x) - direct).norm() < 1e-13 * mass, "x={x}");
        }
    }
}
