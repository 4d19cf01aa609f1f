//! Exact rationals, cyclotomic numbers and rank computations over ℚ(ζ_N).

mod cyclo;
mod matrix;
mod rank;
mod rational;

pub use cyclo::{sin_terms, CycloNumber, Field};
pub use matrix::{ExactMatrix, MatrixError};
pub use rank::{
    exact_rank, exact_rank_with, float_rank, Bareiss, FloatSvd, MultiModular, RankBackend, FLOAT_RANK_TOL,
    RANK_BACKENDS,
};
pub use rational::{denominator_lcm, ParseRationalError, Rational};

/// Absolute tolerance for float cross-checks.
pub const FLOAT_TOL: f64 = 1e-9;
