//! Numerical verification toolkit for the GL(3) t-aspect delta-method argument:
//! exact identities (delta symbol, Voronoi, S = S⁺ + S⁻, Poisson), stationary
//! phase checks with fitted constants, and exact exponent bookkeeping.

pub mod arith;
pub mod cli;
pub mod deltasym;
pub mod error;
pub mod gl3form;
pub mod numeric;
pub mod oscillatory;
pub mod pipeline;
pub mod special;
pub mod voronoi;

pub use error::{Error, Result};
