//! Tropical polynomial evaluation, the cyclic-tour map from pairwise
//! distances to m-subset values, and three-term tropical Pluecker checks.
//!
//! Convention: max-plus throughout. A polynomial over the Puiseux field
//! tropicalizes with constants `a_i = -val(f_i)`, and a point lies on the
//! tropical hypersurface when the maximum is attained at least twice.
//! Dissimilarity vectors enter the Pluecker checks directly (positively):
//! the minor certificates constructed in [`crate::verify`] have
//! `-val(det) = D(I)`, matching these coordinates.

mod phi;
mod pluecker;
mod poly;

pub use phi::{phi_m, phi_m_naive};
pub use pluecker::{
    grassmannian2_membership, grassmannian2_violation, pluecker_3term_scan, PlueckerViolation,
};
pub use poly::{coordinate_name, trop_eval, CornerResult, TropicalPolynomial, TropicalTerm};

use super::metrics::MetricError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TropicalError {
    /// A tropical polynomial needs at least one term.
    #[error("tropical polynomial has no terms")]
    EmptyPolynomial,

    /// The evaluation point lacks a coordinate the polynomial uses.
    #[error("evaluation point is missing coordinate {0:?}")]
    MissingCoordinate(String),

    /// The tour map consumes pairwise values (an m = 2 vector).
    #[error("expected a pairwise vector (m = 2), got m = {0}")]
    NotPairwise(usize),

    #[error(transparent)]
    Metric(#[from] MetricError),
}
