//! Exact arithmetic: arbitrary-precision rationals, multivariate coefficient
//! polynomials, Puiseux polynomials in `t`, and matrices with exact
//! determinants. Everything here is division-free apart from `Rational`
//! itself; no floating point anywhere.

mod coeff;
mod matrix;
mod puiseux;
pub mod rational;
mod varset;

pub use coeff::CoeffPoly;
pub use matrix::PolyMatrix;
pub use puiseux::PuiseuxPoly;
pub use rational::{parse_rational, rat, ratio, Rational};
pub use varset::VarSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// Arithmetic between polynomials over different variable sets.
    #[error("operands are defined over different variable sets")]
    MismatchedVariables,

    /// `t -> t^0` would collapse every exponent.
    #[error("exponent substitution scale must be nonzero")]
    ZeroScale,

    /// Determinant of a non-square matrix.
    #[error("matrix is {rows}x{cols}, determinant needs a square matrix")]
    NonSquare { rows: usize, cols: usize },

    /// Matrix construction from rows of unequal length.
    #[error("matrix rows have unequal lengths")]
    RaggedRows,

    /// Unparseable rational literal.
    #[error("cannot parse {input:?} as a rational number")]
    ParseRational { input: String },
}
