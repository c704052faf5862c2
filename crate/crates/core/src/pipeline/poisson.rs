use crate::arith::mod_inverse;
use crate::error::{Error, Result};
use crate::numeric::{e, CSum};
use crate::oscillatory::{w_dagger_tol, Window};
use num_complex::Complex64;

/// Relative size of the outermost dual terms above which the cap is too small.
const TAIL_REL: f64 = 1e-9;

/// Frequency |r| past which W†(r, 1 − iβ) of the plateau window is at the
/// roundoff floor (about 1e-14) for |β| ≤ 60.
const R_CUT: f64 = 200.0;

/// A cap on |m| that puts every dropped dual term past the decay cutoff.
pub fn poisson_m_cap(q: u64, n: f64) -> u64 {
    (R_CUT * q as f64 / n).ceil() as u64 + 2
}

/// Both sides of Poisson in m:
/// Σ_m m^{−i(t+v)} e(−mā/q) e(mx/aq) V*(m/N) against
/// N^{1−i(t+v)} Σ_{m ≡ ā (q), |m| ≤ cap} V*†(N(ma − x)/aq, 1 − i(t+v)).
#[allow(clippy::too_many_arguments)]
pub fn poisson_m_check(
    q: u64,
    a: i64,
    x: f64,
    t: f64,
    v: f64,
    n: f64,
    vstar: &Window,
    m_cap: u64,
) -> Result<(Complex64, Complex64)> {
    if q == 0 || a <= 0 || !(n > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need q ≥ 1, a ≥ 1, N > 0; got q={q}, a={a}, N={n}"
        )));
    }
    let abar = mod_inverse(a, q)?.residue as i64;
    let beta = t + v;
    let (lo, hi) = vstar.support();
    let aq = a as f64 * q as f64;

    let mut lhs = CSum::new();
    for m in (lo * n).floor() as u64..=(hi * n).ceil() as u64 {
        let w = vstar.value(m as f64 / n);
        if m == 0 || w == 0.0 {
            continue;
        }
        let mf = m as f64;
        let phase = -mf * abar as f64 / q as f64 + mf * x / aq;
        lhs.add(Complex64::from_polar(w, -beta * mf.ln()) * e(phase));
    }

    let s = Complex64::new(1.0, -beta);
    let qi = q as i64;
    let cap = m_cap as i64;
    let first = -cap + (abar + cap).rem_euclid(qi);
    let mut terms = Vec::new();
    let mut m = first;
    while m <= cap {
        let r = n * (m as f64 * a as f64 - x) / aq;
        terms.push(w_dagger_tol(vstar, r, s, 1e-13)?);
        m += qi;
    }
    let pre = Complex64::from_polar(n, -beta * n.ln());
    let rhs = pre * terms.iter().copied().collect::<CSum>().value();
    let edge = match terms.len() {
        0 => 0.0,
        len => terms[0].norm() + terms[len - 1].norm(),
    };
    let estimate = n * edge;
    if estimate > TAIL_REL * rhs.norm().max(1.0) {
        return Err(Error::TruncationTooSmall {
            estimate,
            tol: TAIL_REL * rhs.norm().max(1.0),
        });
    }
    Ok((lhs.value(), rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm())
    }

    #[test]
    fn q1_t0() {
        let vs = Window::v_star();
        let n = 40.0;
        let (l, r) = poisson_m_check(1, 1, 0.0, 0.0, 0.0, n, &vs, poisson_m_cap(1, n)).unwrap();
        let direct: f64 = (1..120).map(|m| vs.value(m as f64 / n)).sum();
        assert!((l.re - direct).abs() < 1e-12 * direct);
        assert!(rel(l, r) < 1e-10, "{l} vs {r}");
        // m = 0 term alone is N∫V*
        assert!((r.re - n * vs.integral()).abs() < 1e-6);
    }

    #[test]
    fn grid_agrees() {
        let vs = Window::v_star();
        for (q, a, x, t, v, n) in [
            (3u64, 4i64, 0.3, 30.0, 2.0, 100.0),
            (5, 7, 0.9, 12.0, -1.5, 60.0),
            (2, 3, 0.5, 40.0, 0.0, 20.0),
            (5, 6, 0.1, 50.0, 1.0, 25.0),
        ] {
            let (l, r) = poisson_m_check(q, a, x, t, v, n, &vs, poisson_m_cap(q, n)).unwrap();
            assert!(rel(l, r) < 1e-6, "q={q}: {l} vs {r}");
        }
    }

    #[test]
    fn wrong_residues_break_it() {
        // summing every m instead of m ≡ ā (mod q) is not an identity
        let vs = Window::v_star();
        let (q, a, x, t, n) = (3u64, 4i64, 0.3, 30.0, 100.0);
        let (l, _) = poisson_m_check(q, a, x, t, 0.0, n, &vs, poisson_m_cap(q, n)).unwrap();
        let s = Complex64::new(1.0, -t);
        let aq = (a as u64 * q) as f64;
        let all: Complex64 = (-5..=5)
            .map(|m| w_dagger_tol(&vs, n * (m as f64 * a as f64 - x) / aq, s, 1e-12).unwrap())
            .sum::<Complex64>()
            * Complex64::from_polar(n, -t * n.ln());
        assert!(rel(l, all) > 1e-2);
    }

    #[test]
    fn small_cap_detected() {
        let vs = Window::v_star();
        let r = poisson_m_check(1, 1, 0.0, 0.0, 0.0, 10.0, &vs, 0);
        assert!(matches!(r, Err(Error::TruncationTooSmall { .. })));
        assert!(poisson_m_check(4, 2, 0.0, 0.0, 0.0, 10.0, &vs, 5).is_err());
    }
}
