use thiserror::Error;

use crate::exactnum::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A lower Pochhammer factor `(c)_j` vanished while the matching numerator term did not.
    #[error("hypergeometric pole: (c)_{index} = 0 with c = {c}")]
    Pole { c: Rational, index: usize },

    #[error("normalization P_{degree}^(alpha, beta)(1) vanishes")]
    DegenerateNormalization { degree: usize },

    #[error("dimension formula produced a non-integer value {value}")]
    NonIntegerDimension { value: Rational },

    #[error("point dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("basis index k = {k} outside [{low}, {high}]")]
    IndexOutOfRange { k: i64, low: i64, high: i64 },

    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("points are at maximal distance (1 + <z,w> = 0); the integral representation degenerates")]
    AntipodalDegenerate,

    #[error("heat-coefficient recurrences require integer nu, got 2nu = {two_nu}")]
    UnsupportedNu { two_nu: u32 },

    #[error("printed nu = 0 reductions exist only for n in 1..=4, got n = {0}")]
    UnsupportedN(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
