//! The computational skeleton of the argument: the smoothed sum S(N), the
//! conductor-lowering kernel, the split S = S⁺ + S⁻, the Poisson step in m,
//! the main-term comparison for 𝕴**, and the exponent bookkeeping.

mod exponents;
mod mainterm;
mod poisson;
mod sums;
mod zeta3;

pub use exponents::{
    afe_bound, bound_terms, exponent_optimize, k_condition_check, proposition_bound, theorem_exponent,
    ExponentMonomial, KCondition, Optimum, R,
};
pub use mainterm::{
    bctau, calibration_corpus, calibration_spec, i_star_star, j1_main_term, j1_shape, MainTermCase, MAIN_TERM_C4,
    MAIN_TERM_CPRIME,
};
pub use poisson::{poisson_m_cap, poisson_m_check};
pub use sums::{conductor_lowering_kernel, s_of_n, s_plus_minus, SumSpec};
pub use zeta3::{zeta_cubed_reference, zeta_em, ZETA_T_CAP};

/// The fixed ε used in every exponent window.
pub const EPSILON: f64 = 0.01;
