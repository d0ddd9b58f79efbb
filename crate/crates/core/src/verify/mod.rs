//! Puiseux-matrix certificates for dissimilarity vectors.
//!
//! The constructions here place m-dissimilarity vectors of trees on
//! tropical Grassmannians explicitly. For an equidistant tree, each leaf
//! gets a truncated Puiseux polynomial summing one coefficient per edge of
//! its root path, weighted by `t` to the edge height. Stacking these (with
//! a row of ones and a squared row) into an m-by-n matrix `M` makes every
//! maximal-minor determinant a polynomial whose degree equals the subtree
//! weight of the chosen leaf set — for m = 4 that is the proved content,
//! for m = 5 it is verified symbolically over all shapes, and for larger m
//! it is checked numerically.
//!
//! The pipeline for a general (non-equidistant) tree: shift the metric to
//! an anchored ultrametric, realize it as an equidistant tree, build the
//! witness, verify minor degrees against the shifted distances, rescale
//! columns back to the original distances, then substitute `t -> t^(-1/2)`
//! so that minus the valuation of each minor is exactly the 4-dissimilarity
//! value. [`end_to_end_theorem5`] chains all of that with a genericity
//! retry loop.

mod assignment;
mod conjecture3;
mod formulas;
mod remark_n;
mod report;
mod thm5;
mod witness;

pub use assignment::CoefficientAssignment;
pub use conjecture3::{
    conjecture3_numeric, conjecture3_symbolic, generic_heights, NumericConjectureRun,
    SymbolicConjectureRun,
};
pub use formulas::{leading_coeff_formula_check, FormulaCheck, SubtreeType};
pub use remark_n::{remark_n_counterexample, RemarkNRecord};
pub use report::{verify_minor_degrees, verify_minor_valuations, CheckMode, MinorReport, VerificationReport};
pub use thm5::{end_to_end_theorem5, Theorem5Report};
pub use witness::{
    build_conj3_matrix, build_thm5_matrix, leaf_series, rescale_columns, to_valuation_witness,
    Construction, WitnessMatrix,
};

use crate::exact::{ExactError, Rational};
use crate::metrics::MetricError;
use crate::trees::TreeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    /// An assignment needs at least one family and one edge.
    #[error("coefficient assignment is empty")]
    EmptyAssignment,

    /// Numeric assignment rows must all cover the same edge set.
    #[error("coefficient families cover unequal edge counts")]
    RaggedAssignment,

    /// A construction asked for a family the assignment does not carry.
    #[error("family {family} not covered (assignment has {families})")]
    FamilyNotCovered { family: usize, families: usize },

    /// The assignment covers a different number of edges than the tree has.
    #[error("assignment covers {got} edges but the tree has {need}")]
    WrongEdgeCount { need: usize, got: usize },

    /// The anchor exponent must exceed the root height.
    #[error("anchor constant E = {e} must exceed the root height F = {f}")]
    AnchorBelowRoot { e: Rational, f: Rational },

    /// Square constructions need at least 3 columns.
    #[error("construction needs at least 3 leaves, got {0}")]
    TooFewColumns(usize),

    /// The pipelines pin their exponent scale to 1 or 2.
    #[error("exponent scale must be 1 or 2, got {0}")]
    BadScale(u32),

    /// Expected values must index exactly the witness columns and rows.
    #[error("expected values are for (n, m) = ({vn}, {vm}), witness has ({wn}, {wm})")]
    ExpectationShape {
        vn: usize,
        vm: usize,
        wn: usize,
        wm: usize,
    },

    /// The chosen subset spans the root, so it cannot demonstrate the
    /// root-containment failure.
    #[error("the minimal subtree of {0:?} contains the root; not a counterexample instance")]
    SubtreeContainsRoot(Vec<usize>),

    /// Fresh coefficient draws kept producing a vanishing leading
    /// coefficient. Genericity failures have probability zero over growing
    /// ranges, so this indicates a bug rather than bad luck.
    #[error("genericity retries exhausted after {attempts} attempts")]
    RetriesExhausted { attempts: u32 },

    /// The pipeline needs more leaves than the tree has.
    #[error("need at least {need} leaves, got {got}")]
    TooFewLeaves { need: usize, got: usize },

    #[error(transparent)]
    Exact(#[from] ExactError),

    #[error(transparent)]
    Metric(#[from] MetricError),

    #[error(transparent)]
    Tree(#[from] TreeError),
}
