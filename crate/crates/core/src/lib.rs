//! Exact computation with weighted trees, their dissimilarity vectors, and
//! Puiseux-matrix certificates placing those vectors on tropical
//! Grassmannians.
//!
//! The crate is organised as a pipeline:
//!
//! * [`exact`] — rationals, coefficient polynomials, Puiseux polynomials,
//!   matrices with exact determinants;
//! * [`trees`] — weighted trees, equidistant trees, rooted binary shapes,
//!   Newick I/O, seeded random generation;
//! * [`metrics`] — distance matrices, m-dissimilarity vectors, the
//!   four-point and ultrametric conditions, tree reconstruction;
//! * [`tropical`] — tropical polynomial evaluation, the cyclic-permutation
//!   formula for m-dissimilarity from pairwise distances, three-term
//!   Pluecker membership scans;
//! * [`verify`] — matrix certificates: minor-degree verification for
//!   equidistant trees, the ultrametric-shift construction for general
//!   trees, leading-coefficient formulas, and the root-containment
//!   counterexample.

// Error variants deliberately carry full violation witnesses (exact
// rationals, index tuples); they arise on cold paths and are consumed
// immediately, so boxing them would only obscure the API.
#![allow(clippy::result_large_err)]

pub mod exact;
pub mod fixtures;
pub mod metrics;
pub mod trees;
pub mod tropical;
pub mod verify;

pub use exact::{CoeffPoly, ExactError, PolyMatrix, PuiseuxPoly, Rational, VarSet};
pub use metrics::{DissimilarityMatrix, MetricError, MVector};
pub use trees::{EquidistantTree, TreeError, TreeShape, WeightedTree};
pub use tropical::{TropicalError, TropicalPolynomial};
pub use verify::{Theorem5Report, VerifyError, WitnessMatrix};
