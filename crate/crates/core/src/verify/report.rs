//! Minor-by-minor certificate checking.

use rayon::prelude::*;
use serde::Serialize;

use super::{VerifyError, WitnessMatrix};
use crate::exact::rational::{rational_opt_str, rational_str};
use crate::exact::{rat, CoeffPoly, Rational};
use crate::metrics::MVector;

/// Which exponent statistic of a minor's determinant is being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// The degree must equal the target.
    Degree,
    /// Minus the valuation must equal the target.
    NegValuation,
}

/// Outcome for one maximal minor.
#[derive(Debug, Clone, Serialize)]
pub struct MinorReport {
    /// Column labels selecting the minor, ascending.
    pub subset: Vec<usize>,
    /// Target exponent, with any announced factor already applied.
    #[serde(with = "rational_str")]
    pub expected: Rational,
    /// The determinant's actual degree (or minus-valuation); `None` when
    /// the determinant vanished identically.
    #[serde(with = "rational_opt_str")]
    pub computed: Option<Rational>,
    /// The determinant's coefficient at the target exponent. Zero exactly
    /// when the generically extremal term cancelled for this particular
    /// coefficient choice.
    pub leading: CoeffPoly,
    pub pass: bool,
}

/// Every maximal minor of one witness matrix checked against one
/// expectation vector.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub mode: CheckMode,
    pub minors: Vec<MinorReport>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.minors.iter().all(|m| m.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &MinorReport> {
        self.minors.iter().filter(|m| !m.pass)
    }

    /// True when the report failed but every failure is the signature of
    /// an unlucky coefficient choice: the target term cancelled and the
    /// exponent fell short (or the whole determinant vanished). Fresh
    /// generic coefficients can cure such failures. An exponent that
    /// *exceeds* its target is never curable and rules this out.
    pub fn only_genericity_failures(&self) -> bool {
        let mut failed = self.failures().peekable();
        failed.peek().is_some()
            && failed.all(|m| {
                m.leading.is_zero()
                    && m.computed.as_ref().is_none_or(|c| c < &m.expected)
            })
    }
}

/// Checks `deg det M(I) = factor * expected(I)` for every subset `I` in the
/// expectation vector, recording the coefficient at the target exponent.
pub fn verify_minor_degrees(
    w: &WitnessMatrix,
    expected: &MVector,
    factor: &Rational,
) -> Result<VerificationReport, VerifyError> {
    run_checks(w, expected, factor, CheckMode::Degree)
}

/// Checks `-val det M(I) = expected(I)` for every subset `I`; this is the
/// membership-style reading used after the `t -> t^(-1/2)` substitution.
pub fn verify_minor_valuations(
    w: &WitnessMatrix,
    expected: &MVector,
) -> Result<VerificationReport, VerifyError> {
    run_checks(w, expected, &rat(1), CheckMode::NegValuation)
}

fn run_checks(
    w: &WitnessMatrix,
    expected: &MVector,
    factor: &Rational,
    mode: CheckMode,
) -> Result<VerificationReport, VerifyError> {
    let (wn, wm) = (w.labels().len(), w.matrix().rows());
    if expected.n() != wn || expected.m() != wm {
        return Err(VerifyError::ExpectationShape {
            vn: expected.n(),
            vm: expected.m(),
            wn,
            wm,
        });
    }
    let targets: Vec<(Vec<usize>, Rational)> = expected
        .iter()
        .map(|(subset, value)| (subset, factor * value))
        .collect();
    let minors = targets
        .into_par_iter()
        .map(|(subset, target)| {
            let det = w.minor(&subset)?.determinant()?;
            let (computed, leading) = match mode {
                CheckMode::Degree => (det.degree(), det.coeff_at(&target)),
                CheckMode::NegValuation => {
                    (det.valuation().map(|v| -v), det.coeff_at(&-&target))
                }
            };
            let pass = computed.as_ref() == Some(&target);
            Ok(MinorReport {
                subset,
                expected: target,
                computed,
                leading,
                pass,
            })
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    Ok(VerificationReport { mode, minors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::trees::{EquidistantTree, TreeBuilder};
    use crate::verify::{
        build_thm5_matrix, to_valuation_witness, CoefficientAssignment,
    };

    /// Balanced 4-leaf tree: cherries `{1,2}` at height 1 and `{3,4}` at
    /// height 2 under a root at height 3.
    fn balanced4() -> EquidistantTree {
        let mut b = TreeBuilder::new();
        let leaves: Vec<_> = (1..=4).map(|l| b.add_leaf(l)).collect();
        let w = b.add_internal();
        let u = b.add_internal();
        let v = b.add_internal();
        b.add_edge(w, leaves[0], rat(1));
        b.add_edge(w, leaves[1], rat(1));
        b.add_edge(u, leaves[2], rat(2));
        b.add_edge(u, leaves[3], rat(2));
        b.add_edge(v, w, rat(2));
        b.add_edge(v, u, rat(1));
        b.set_root(v);
        EquidistantTree::from_weighted(b.build().unwrap()).unwrap()
    }

    fn anchored_expectation(tree: &EquidistantTree, e: i64) -> MVector {
        let pendant = rat(2 * e) - tree.root_height();
        let anchored = tree.attach_anchor(&pendant).unwrap();
        MVector::of_tree(&anchored, 4).unwrap()
    }

    #[test]
    fn generic_coefficients_pass_all_five_minors() {
        let tree = balanced4();
        let a = CoefficientAssignment::seeded(2, 6, 42, 1_000).unwrap();
        let w = build_thm5_matrix(&tree, &rat(5), &a).unwrap();
        let expected = anchored_expectation(&tree, 5);
        let report = verify_minor_degrees(&w, &expected, &rat(2)).unwrap();
        assert_eq!(report.minors.len(), 5);
        assert!(report.all_pass(), "failures: {:?}", report.failures().count());
        assert!(!report.only_genericity_failures());
        for m in &report.minors {
            assert!(!m.leading.is_zero());
            assert_eq!(m.computed, Some(m.expected.clone()));
        }
    }

    #[test]
    fn valuation_mode_matches_after_substitution() {
        let tree = balanced4();
        let a = CoefficientAssignment::seeded(2, 6, 7, 1_000).unwrap();
        let w = build_thm5_matrix(&tree, &rat(5), &a).unwrap();
        let expected = anchored_expectation(&tree, 5);
        let v = to_valuation_witness(&w);
        let report = verify_minor_valuations(&v, &expected).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.mode, CheckMode::NegValuation);
        // Spot check: minus the valuation of the {1,2,3,4} minor is the
        // 4-dissimilarity of those leaves, i.e. the total length 9 of the
        // subtree they span (the anchor pendant dangles outside it).
        let first = &report.minors[0];
        assert_eq!(first.subset, vec![1, 2, 3, 4]);
        assert_eq!(first.computed, Some(rat(9)));
    }

    #[test]
    fn inflated_target_reads_as_genericity_style_failure() {
        // Raising one target above the true degree makes that minor fall
        // short with a vanished target coefficient -- the same signature
        // an unlucky seed would produce, which is why callers retry.
        let tree = balanced4();
        let a = CoefficientAssignment::seeded(2, 6, 42, 1_000).unwrap();
        let w = build_thm5_matrix(&tree, &rat(5), &a).unwrap();
        let expected = anchored_expectation(&tree, 5);
        let bumped = expected
            .with_value(&[1, 2, 3, 4], expected.value(&[1, 2, 3, 4]).unwrap() + rat(1))
            .unwrap();
        let report = verify_minor_degrees(&w, &bumped, &rat(2)).unwrap();
        assert!(!report.all_pass());
        assert_eq!(report.failures().count(), 1);
        assert!(report.only_genericity_failures());
    }

    #[test]
    fn deflated_target_is_a_hard_violation() {
        // Lowering a target below the true degree leaves a term above it:
        // no coefficient choice can cure that, and the report says so.
        let tree = balanced4();
        let a = CoefficientAssignment::seeded(2, 6, 42, 1_000).unwrap();
        let w = build_thm5_matrix(&tree, &rat(5), &a).unwrap();
        let expected = anchored_expectation(&tree, 5);
        let lowered = expected
            .with_value(&[1, 2, 3, 4], expected.value(&[1, 2, 3, 4]).unwrap() - rat(1))
            .unwrap();
        let report = verify_minor_degrees(&w, &lowered, &rat(2)).unwrap();
        assert!(!report.all_pass());
        assert!(!report.only_genericity_failures());
        let failing = report.failures().next().unwrap();
        assert!(failing.computed.as_ref().unwrap() > &failing.expected);
    }

    #[test]
    fn identical_families_vanish_every_minor() {
        // x = y collapses two rows, so every determinant is identically
        // zero: the definitive "retry with a fresh seed" shape.
        let tree = balanced4();
        let row: Vec<Rational> = (1..=6).map(rat).collect();
        let a = CoefficientAssignment::numeric(vec![row.clone(), row]).unwrap();
        let w = build_thm5_matrix(&tree, &rat(5), &a).unwrap();
        let expected = anchored_expectation(&tree, 5);
        let report = verify_minor_degrees(&w, &expected, &rat(2)).unwrap();
        assert!(!report.all_pass());
        assert!(report.only_genericity_failures());
        for m in &report.minors {
            assert_eq!(m.computed, None);
            assert!(m.leading.is_zero());
        }
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let tree = balanced4();
        let a = CoefficientAssignment::seeded(2, 6, 1, 100).unwrap();
        let w = build_thm5_matrix(&tree, &rat(5), &a).unwrap();
        let wrong_m = MVector::of_tree(&tree.attach_anchor(&rat(7)).unwrap(), 3).unwrap();
        assert!(matches!(
            verify_minor_degrees(&w, &wrong_m, &rat(2)),
            Err(VerifyError::ExpectationShape { vm: 3, wm: 4, .. })
        ));
    }

    #[test]
    fn fractional_factor_scales_targets() {
        // Checking deg = 2 D'(I) with factor 1 against half the values is
        // the same as factor 2 against the values themselves.
        let tree = balanced4();
        let a = CoefficientAssignment::seeded(2, 6, 11, 1_000).unwrap();
        let w = build_thm5_matrix(&tree, &rat(5), &a).unwrap();
        let expected = anchored_expectation(&tree, 5);
        let doubled = verify_minor_degrees(&w, &expected, &rat(2)).unwrap();
        let quadrupled_half = verify_minor_degrees(&w, &expected, &ratio(4, 2)).unwrap();
        assert!(doubled.all_pass() && quadrupled_half.all_pass());
        assert_eq!(
            doubled.minors[2].expected,
            quadrupled_half.minors[2].expected
        );
    }
}
