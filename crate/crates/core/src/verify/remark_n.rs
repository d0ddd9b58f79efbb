//! Why the row of ones is load-bearing.
//!
//! Dropping the constant row and using one coefficient family per row --
//! the matrix `N` with rows `x^(1), ..., x^(k)` -- looks like a simpler
//! witness, but its minor degrees measure the wrong subtree: the one
//! spanned by the chosen leaves *and the root*. The row of ones lets the
//! determinant cancel the common root-to-meeting-point prefix out of every
//! column, which is exactly what restricts the measurement to the leaves'
//! own spanning subtree. This module builds both matrices on a concrete
//! subset and records the two degrees side by side.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{leaf_series, CoefficientAssignment, VerifyError};
use crate::exact::rational::{rational_opt_str, rational_str};
use crate::exact::{PolyMatrix, PuiseuxPoly, Rational};
use crate::trees::EquidistantTree;

/// The two degrees measured on one leaf subset, with and without the row
/// of ones.
#[derive(Debug, Clone, Serialize)]
pub struct RemarkNRecord {
    pub subset: Vec<usize>,
    /// Total length of the subtree spanned by the subset alone.
    #[serde(with = "rational_str")]
    pub steiner_weight: Rational,
    /// Total length once the root is forced into the subtree.
    #[serde(with = "rational_str")]
    pub root_inclusive_weight: Rational,
    /// Degree of `det N`, rows `x^(1), ..., x^(k)`.
    #[serde(with = "rational_opt_str")]
    pub degree_without_ones: Option<Rational>,
    /// Degree of the determinant with rows `1, x^(1), (x^(1))^2,
    /// x^(2), ..., x^(k-2)` on the same columns.
    #[serde(with = "rational_opt_str")]
    pub degree_with_ones: Option<Rational>,
    /// True when the two constructions measured the two different weights
    /// and those weights actually differ.
    pub counterexample_confirmed: bool,
}

/// Builds `N` (no ones row) and the ones-row matrix on the columns named
/// by `subset`, with fully symbolic coefficients, and compares their
/// degrees against the two candidate weights.
///
/// The subset must have at least three leaves and must span a subtree
/// that stays strictly below the root; otherwise the two weights coincide
/// and there is nothing to exhibit.
pub fn remark_n_counterexample(
    tree: &EquidistantTree,
    subset: &[usize],
) -> Result<RemarkNRecord, VerifyError> {
    let k = subset.len();
    if k < 3 {
        return Err(VerifyError::TooFewColumns(k));
    }
    let steiner_weight = tree.tree().steiner_weight(subset)?;
    let root_inclusive_weight = root_inclusive_weight(tree, subset)?;
    if steiner_weight == root_inclusive_weight {
        return Err(VerifyError::SubtreeContainsRoot(subset.to_vec()));
    }

    let assignment = CoefficientAssignment::symbolic(k, tree.tree().edges().len())?;
    let series = |leaf: usize, family: usize| leaf_series(tree, &assignment, leaf, family, 1);

    let mut plain_rows = Vec::with_capacity(k);
    for family in 1..=k {
        plain_rows.push(
            subset
                .iter()
                .map(|&leaf| series(leaf, family))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let degree_without_ones = PolyMatrix::from_rows(plain_rows)?.determinant()?.degree();

    let first: Vec<PuiseuxPoly> = subset
        .iter()
        .map(|&leaf| series(leaf, 1))
        .collect::<Result<_, _>>()?;
    let mut ones_rows = Vec::with_capacity(k);
    ones_rows.push(vec![PuiseuxPoly::one(assignment.vars()); k]);
    ones_rows.push(first.clone());
    ones_rows.push(first.iter().map(PuiseuxPoly::square).collect());
    for family in 2..=k - 2 {
        ones_rows.push(
            subset
                .iter()
                .map(|&leaf| series(leaf, family))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let degree_with_ones = PolyMatrix::from_rows(ones_rows)?.determinant()?.degree();

    let counterexample_confirmed = degree_without_ones.as_ref() == Some(&root_inclusive_weight)
        && degree_with_ones.as_ref() == Some(&steiner_weight);
    Ok(RemarkNRecord {
        subset: subset.to_vec(),
        steiner_weight,
        root_inclusive_weight,
        degree_without_ones,
        degree_with_ones,
        counterexample_confirmed,
    })
}

/// Length of the union of the root-to-leaf paths of `subset`.
fn root_inclusive_weight(
    tree: &EquidistantTree,
    subset: &[usize],
) -> Result<Rational, VerifyError> {
    let mut used = BTreeSet::new();
    for &leaf in subset {
        used.extend(tree.root_path_edges(leaf)?);
    }
    Ok(used
        .into_iter()
        .map(|e| tree.tree().edges()[e].length.clone())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fixtures::example_5tree;

    #[test]
    fn cherry_plus_neighbor_exhibits_the_gap() {
        // Leaves {1,2,3} of the worked example meet at height 7, three
        // units below the root: their own subtree weighs 18, the
        // root-forced one 21, and the two matrices measure one each.
        let tree = example_5tree();
        let record = remark_n_counterexample(&tree, &[1, 2, 3]).unwrap();
        assert_eq!(record.steiner_weight, rat(18));
        assert_eq!(record.root_inclusive_weight, rat(21));
        assert_eq!(record.degree_without_ones, Some(rat(21)));
        assert_eq!(record.degree_with_ones, Some(rat(18)));
        assert!(record.counterexample_confirmed);
    }

    #[test]
    fn root_spanning_subsets_are_rejected() {
        // Any subset with leaves on both sides of the root already
        // contains it, so both weights coincide.
        let tree = example_5tree();
        for subset in [vec![1, 2, 4], vec![3, 4, 5], vec![1, 2, 3, 4, 5]] {
            assert!(matches!(
                remark_n_counterexample(&tree, &subset),
                Err(VerifyError::SubtreeContainsRoot(_))
            ));
        }
    }

    #[test]
    fn pairs_are_too_small_for_the_row_pattern() {
        let tree = example_5tree();
        assert!(matches!(
            remark_n_counterexample(&tree, &[1, 2]),
            Err(VerifyError::TooFewColumns(2))
        ));
    }

    #[test]
    fn unknown_leaves_propagate_as_tree_errors() {
        let tree = example_5tree();
        assert!(remark_n_counterexample(&tree, &[1, 2, 9]).is_err());
    }

    #[test]
    fn gap_equals_root_to_meeting_point_distance() {
        let tree = example_5tree();
        let record = remark_n_counterexample(&tree, &[1, 2, 3]).unwrap();
        let lca = tree.lca(1, 3).unwrap();
        let gap = tree.root_height() - tree.node_height(lca);
        assert_eq!(
            &record.root_inclusive_weight - &record.steiner_weight,
            gap
        );
    }
}
