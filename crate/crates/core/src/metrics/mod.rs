//! Dissimilarity data and the conditions that make it tree-like.
//!
//! A [`DissimilarityMatrix`] holds pairwise values `D(i,j)`; an [`MVector`]
//! holds one value per m-subset of leaves. The two membership tests are the
//! four-point condition (tree metrics) and the three-point condition
//! (ultrametrics); both report violations as concrete witnesses rather than
//! booleans. The ultrametric shift and its equidistant realization are the
//! two metric-level steps used to certify general trees.

mod matrix;
mod mvector;
mod reconstruct;

pub(crate) use matrix::max_attained_twice;
pub use matrix::{DissimilarityMatrix, FourPointViolation, UltrametricViolation};
pub use mvector::MVector;
pub use reconstruct::{equidistant_realization, reconstruct_tree};

use crate::exact::Rational;
use crate::trees::TreeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    /// Construction from data that is not symmetric with a zero diagonal.
    #[error("invalid dissimilarity matrix: {0}")]
    BadMatrix(String),

    /// The matrix is not a tree metric.
    #[error("four-point condition fails: {0}")]
    FourPoint(FourPointViolation),

    /// The matrix is not an ultrametric.
    #[error("ultrametric condition fails: {0}")]
    Ultrametric(UltrametricViolation),

    /// `ultrametric_shift` needs `E >= max_i D(i, n)`.
    #[error("shift constant E = {given} is below max_i D(i,n) = {required}")]
    ShiftBoundTooSmall { given: Rational, required: Rational },

    /// Subset size out of range for the given number of leaves.
    #[error("m = {m} out of range for n = {n} (need 2 <= m <= n)")]
    MOutOfRange { m: usize, n: usize },

    /// A leaf subset that is not sorted, not distinct, or out of range.
    #[error("bad leaf subset: {0}")]
    BadSubset(String),

    /// Malformed CSV/JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Internal consistency check: the reconstructed tree must reproduce
    /// the input distances exactly.
    #[error("reconstruction mismatch at ({i},{j}): expected {expected}, got {got}")]
    ReconstructionMismatch {
        i: usize,
        j: usize,
        expected: Rational,
        got: Rational,
    },

    #[error(transparent)]
    Tree(#[from] TreeError),
}
