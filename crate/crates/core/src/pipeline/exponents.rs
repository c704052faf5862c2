use super::EPSILON;
use crate::error::{Error, Result};
use num_rational::Ratio;
use std::fmt;

pub type R = Ratio<i64>;

fn r(n: i64, d: i64) -> R {
    R::new(n, d)
}

/// t^{e_t} N^{e_N} K^{e_K} with exact rational exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMonomial {
    pub label: String,
    pub t: R,
    pub n: R,
    pub k: R,
}

impl ExponentMonomial {
    pub fn new(label: &str, t: R, n: R, k: R) -> Self {
        ExponentMonomial {
            label: label.to_string(),
            t,
            n,
            k,
        }
    }

    pub fn t_power(label: &str, t: R) -> Self {
        Self::new(label, t, R::from(0), R::from(0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        ExponentMonomial {
            label: format!("{}·{}", self.label, o.label),
            t: self.t + o.t,
            n: self.n + o.n,
            k: self.k + o.k,
        }
    }

    pub fn pow(&self, e: R) -> Self {
        ExponentMonomial {
            label: format!("({})^{e}", self.label),
            t: self.t * e,
            n: self.n * e,
            k: self.k * e,
        }
    }

    /// K ↦ `kv`, a monomial in t and N.
    pub fn substitute_k(&self, kv: &Self) -> Self {
        let mut out = self.clone();
        out.k = R::from(0);
        out.t += self.k * kv.t;
        out.n += self.k * kv.n;
        out
    }

    /// The t-exponent after N = t^ν, K = t^κ.
    pub fn t_exponent(&self, nu: R, kappa: R) -> R {
        self.t + self.n * nu + self.k * kappa
    }

    pub fn same_powers(&self, o: &Self) -> bool {
        self.t == o.t && self.n == o.n && self.k == o.k
    }
}

impl fmt::Display for ExponentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (sym, e) in [("t", self.t), ("N", self.n), ("K", self.k)] {
            if e != R::from(0) {
                parts.push(format!("{sym}^({e})"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    /// The optimal K as a monomial in t and N.
    pub k_opt: ExponentMonomial,
    /// max of the terms at K = k_opt.
    pub value: ExponentMonomial,
}

/// The K minimizing max(terms), found among crossings of a K-increasing and a
/// K-decreasing term. `nu` (N = t^ν) only ranks competing crossings.
pub fn exponent_optimize(terms: &[ExponentMonomial], nu: R) -> Result<Optimum> {
    let zero = R::from(0);
    let mut best: Option<(R, Optimum)> = None;
    for up in terms.iter().filter(|x| x.k > zero) {
        for down in terms.iter().filter(|x| x.k < zero) {
            // up·K^{a} = down·K^{b}  ⇒  K = (down/up)^{1/(a−b)}
            let dk = up.k - down.k;
            let base = ExponentMonomial::new("K", down.t - up.t, down.n - up.n, zero);
            let k_opt = base.pow(R::from(1) / dk);
            let k_opt = ExponentMonomial {
                label: "K_opt".into(),
                ..k_opt
            };
            let kappa = k_opt.t_exponent(nu, zero);
            let (worst, arg) = terms
                .iter()
                .map(|x| (x.t_exponent(nu, kappa), x))
                .max_by(|a, b| a.0.cmp(&b.0))
                .expect("terms are nonempty here");
            let value = ExponentMonomial {
                label: arg.label.clone(),
                ..arg.substitute_k(&k_opt)
            };
            if best.as_ref().map_or(true, |(b, _)| worst < *b) {
                best = Some((worst, Optimum { k_opt, value }));
            }
        }
    }
    best.map(|(_, o)| o).ok_or(Error::NoCrossing)
}

/// S⁺(N) ≪ N^{3/4}{K^{11/12} + t^{1/2}K^{−5/12}}, the two surviving terms.
pub fn bound_terms() -> Vec<ExponentMonomial> {
    vec![
        ExponentMonomial::new("N^(3/4)K^(11/12)", R::from(0), r(3, 4), r(11, 12)),
        ExponentMonomial::new("N^(3/4)t^(1/2)K^(-5/12)", r(1, 2), r(3, 4), r(-5, 12)),
    ]
}

/// The bound for S⁺(N) after optimizing K.
pub fn proposition_bound() -> Result<Optimum> {
    exponent_optimize(&bound_terms(), r(3, 2))
}

/// sup_{N ≤ t^{nmax}} N^{−1/2}·bound, as a power of t.
pub fn theorem_exponent(bound: &ExponentMonomial, nmax: R) -> R {
    let e_n = bound.n - r(1, 2);
    let zero = R::from(0);
    if e_n > zero {
        bound.t + e_n * nmax
    } else {
        bound.t
    }
}

/// (1+t)^ε·sup_ratio.
pub fn afe_bound(t: f64, sup_ratio: f64) -> f64 {
    (1.0 + t).powf(EPSILON) * sup_ratio
}

#[derive(Debug, Clone, PartialEq)]
pub struct KCondition {
    pub ok: bool,
    /// (name, holds, lhs, rhs) for each inequality lhs < rhs.
    pub checks: Vec<(&'static str, bool, f64, f64)>,
}

impl KCondition {
    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.1).map(|c| c.0).collect()
    }
}

/// t^{11/8} < N < t^{3/2+ε}, t^{6/5}/N^{3/5} < K < min{t^{2−ε}/N, N^{1/3}}.
pub fn k_condition_check(n: f64, t: f64, k: f64) -> KCondition {
    let ln = |x: f64| x.ln();
    let lt = ln(t);
    // compared in log space so the extreme ranges stay finite
    let rows = [
        ("N > t^(11/8)", 11.0 / 8.0 * lt, ln(n)),
        ("N < t^(3/2+eps)", ln(n), (1.5 + EPSILON) * lt),
        ("K > t^(6/5)/N^(3/5)", 1.2 * lt - 0.6 * ln(n), ln(k)),
        (
            "K < min(t^(2-eps)/N, N^(1/3))",
            ln(k),
            ((2.0 - EPSILON) * lt - ln(n)).min(ln(n) / 3.0),
        ),
    ];
    let checks: Vec<_> = rows
        .iter()
        .map(|&(name, a, b)| (name, a < b, a.exp(), b.exp()))
        .collect();
    KCondition {
        ok: checks.iter().all(|c| c.1),
        checks,
    }
}
