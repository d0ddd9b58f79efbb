//! The full 4-dissimilarity certificate pipeline.
//!
//! Given a positively weighted tree on `n >= 5` leaves, this produces a
//! matrix over Puiseux polynomials whose maximal-minor valuations realize
//! the tree's 4-dissimilarity vector, checking every intermediate claim
//! exactly along the way:
//!
//! 1. shift the leaf metric against anchor leaf `n` so the interior
//!    becomes an ultrametric, and realize it as an equidistant tree;
//! 2. build the anchored witness with seeded coefficients and check that
//!    every quadruple minor has degree twice the *shifted* dissimilarity;
//! 3. rescale columns to undo the shift and check degrees against the
//!    *original* dissimilarities;
//! 4. substitute `t -> t^(-1/2)` and check that minus the valuation of
//!    each minor is exactly the original dissimilarity.
//!
//! Seeded coefficients can be unlucky (a generically nonzero leading
//! coefficient may vanish), so the draw widens and repeats a bounded
//! number of times; failures that no draw can fix are reported
//! immediately.

use serde::Serialize;

use super::{
    build_thm5_matrix, rescale_columns, to_valuation_witness, verify_minor_degrees,
    verify_minor_valuations, CoefficientAssignment, VerificationReport, VerifyError,
    WitnessMatrix,
};
use crate::exact::rational::rational_str;
use crate::exact::{rat, Rational};
use crate::metrics::{equidistant_realization, DissimilarityMatrix, MVector};
use crate::trees::WeightedTree;

/// Everything the pipeline measured, plus the final witness itself.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem5Report {
    /// Base seed supplied by the caller; attempt `k` draws from
    /// `seed + k * 0x9e3779b97f4a7c15` (wrapping).
    pub seed: u64,
    /// Digest of the input tree, for tying the report to its input.
    pub tree_digest: String,
    pub n: usize,
    /// The shift constant: the largest distance from the anchor leaf.
    #[serde(with = "rational_str")]
    pub e: Rational,
    /// Coefficient draws consumed, including the final one.
    pub attempts: u32,
    /// Degrees against twice the shifted dissimilarities.
    pub shifted: VerificationReport,
    /// Degrees against twice the original dissimilarities, after the
    /// column rescale.
    pub rescaled: VerificationReport,
    /// Minus-valuations against the original dissimilarities, after the
    /// substitution.
    pub valuation: VerificationReport,
    /// The valuation-form witness from the final attempt.
    pub witness: WitnessMatrix,
    pub pass: bool,
}

/// Runs the pipeline on `tree`, retrying the coefficient draw up to
/// `max_retries` extra times when a failure is curable by a fresh draw.
pub fn end_to_end_theorem5(
    tree: &WeightedTree,
    seed: u64,
    max_retries: u32,
) -> Result<Theorem5Report, VerifyError> {
    let n = tree.n_leaves();
    if n < 5 {
        return Err(VerifyError::TooFewLeaves { need: 5, got: n });
    }
    let d = DissimilarityMatrix::from_tree(tree)?;
    let (shifted_full, e) = d.ultrametric_shift(None)?;
    let interior_labels: Vec<usize> = (1..n).collect();
    let interior = shifted_full.restrict(&interior_labels)?;
    let equidistant = equidistant_realization(&interior)?;
    let two_e = &e * rat(2);
    let pendant = &two_e - equidistant.root_height();
    let anchored = equidistant.attach_anchor(&pendant)?;

    let expected_shifted = MVector::of_tree(&anchored, 4)?;
    let expected_original = MVector::of_tree(tree, 4)?;

    // Undo the shift column by column: leaf columns by the per-leaf
    // anchor-distance defect, the anchor column by the full constant.
    let mut exponents: Vec<Rational> = (1..n)
        .map(|i| (d.get(i, n) - &e) * rat(2))
        .collect();
    exponents.push(-&two_e);

    let edges = equidistant.tree().edges().len();
    for attempt in 0..=max_retries {
        let attempts = attempt + 1;
        let draw_seed = seed.wrapping_add(u64::from(attempt).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let max_abs = 10_000i64.saturating_mul(10i64.pow(attempt.min(3)));
        let assignment = CoefficientAssignment::seeded(2, edges, draw_seed, max_abs)?;

        let witness = build_thm5_matrix(&equidistant, &e, &assignment)?;
        let shifted = verify_minor_degrees(&witness, &expected_shifted, &rat(2))?;
        let rescaled_witness = rescale_columns(&witness, &exponents);
        let rescaled = verify_minor_degrees(&rescaled_witness, &expected_original, &rat(2))?;
        let valuation_witness = to_valuation_witness(&rescaled_witness);
        let valuation = verify_minor_valuations(&valuation_witness, &expected_original)?;

        let stages = [&shifted, &rescaled, &valuation];
        let pass = stages.iter().all(|s| s.all_pass());
        let curable = !pass
            && stages
                .iter()
                .all(|s| s.all_pass() || s.only_genericity_failures());
        if curable && attempt < max_retries {
            continue;
        }
        if curable {
            return Err(VerifyError::RetriesExhausted { attempts });
        }
        return Ok(Theorem5Report {
            seed,
            tree_digest: tree.digest(),
            n,
            e,
            attempts,
            shifted,
            rescaled,
            valuation,
            witness: valuation_witness,
            pass,
        });
    }
    unreachable!("loop always returns or errors on its final iteration")
}
