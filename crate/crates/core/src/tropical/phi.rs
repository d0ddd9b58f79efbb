//! The cyclic-tour map sending pairwise values to m-subset values.
//!
//! For an m-subset `I` the output coordinate is
//!
//! ```text
//! X_I = (1/2) * min over cyclic orders (i_1, ..., i_m) of I of
//!       x(i_1, i_2) + x(i_2, i_3) + ... + x(i_m, i_1)
//! ```
//!
//! When the pairwise input comes from a weighted tree, `X_I` is the total
//! length of the subtree spanned by `I`: the shortest tour walks that
//! subtree's Euler circuit, crossing each edge exactly twice.

use itertools::Itertools;
use rayon::prelude::*;

use super::TropicalError;
use crate::exact::Rational;
use crate::metrics::{DissimilarityMatrix, MetricError, MVector};

/// Applies the tour map to a pairwise vector, producing the m-subset vector.
///
/// Cyclic orders are enumerated by fixing the smallest element of `I` first
/// and permuting the rest; a tour and its reversal have equal sums because
/// the input is symmetric, so for m >= 3 only permutations whose first entry
/// is smaller than their last are scored, (m-1)!/2 tours per subset. With
/// m = 2 the single tour crosses the pair twice and the map is the identity.
pub fn phi_m(pairwise: &MVector, m: usize) -> Result<MVector, TropicalError> {
    phi_impl(pairwise, m, true)
}

/// Same map without the reversal pruning: all (m-1)! tours are scored.
///
/// Exists purely as an independent oracle for testing the pruned version.
#[doc(hidden)]
pub fn phi_m_naive(pairwise: &MVector, m: usize) -> Result<MVector, TropicalError> {
    phi_impl(pairwise, m, false)
}

fn phi_impl(pairwise: &MVector, m: usize, prune: bool) -> Result<MVector, TropicalError> {
    if pairwise.m() != 2 {
        return Err(TropicalError::NotPairwise(pairwise.m()));
    }
    let n = pairwise.n();
    if m < 2 || m > n {
        return Err(MetricError::MOutOfRange { m, n }.into());
    }
    // Dense storage makes the tour inner loop O(1) per lookup.
    let d = pairwise.to_matrix()?;
    let subsets: Vec<Vec<usize>> = (1..=n).combinations(m).collect();
    let pairs: Vec<(Vec<usize>, Rational)> = subsets
        .into_par_iter()
        .map(|subset| {
            let value = min_tour(&d, &subset, prune);
            (subset, value)
        })
        .collect();
    Ok(MVector::from_values(n, m, pairs)?)
}

fn min_tour(d: &DissimilarityMatrix, subset: &[usize], prune: bool) -> Rational {
    let first = subset[0];
    let rest = &subset[1..];
    let mut best: Option<Rational> = None;
    for tour in rest.iter().copied().permutations(rest.len()) {
        if prune && tour.len() >= 2 && tour[0] > tour[tour.len() - 1] {
            continue;
        }
        let mut sum = d.get(first, tour[0]).clone();
        for (a, b) in tour.iter().tuple_windows() {
            sum += d.get(*a, *b);
        }
        sum += d.get(tour[tour.len() - 1], first);
        if best.as_ref().is_none_or(|b| &sum < b) {
            best = Some(sum);
        }
    }
    best.expect("subset has at least two elements") / Rational::from_integer(2.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::fixtures::example_5tree;
    use crate::trees::random_tree;

    fn example_pairwise() -> MVector {
        let tree = example_5tree();
        MVector::of_tree(tree.tree(), 2).unwrap()
    }

    #[test]
    fn m_two_is_the_identity() {
        let pairwise = example_pairwise();
        assert_eq!(phi_m(&pairwise, 2).unwrap(), pairwise);
    }

    #[test]
    fn example_quadruple_matches_the_hand_tour() {
        // On {1,2,3,4} the cheapest tour is 1 -> 2 -> 3 -> 4 -> 1 with
        // length 8 + 14 + 20 + 20 = 62, so the coordinate is 31.
        let out = phi_m(&example_pairwise(), 4).unwrap();
        assert_eq!(out.value(&[1, 2, 3, 4]).unwrap(), &rat(31));
    }

    #[test]
    fn triples_have_a_single_cyclic_order() {
        // For m = 3 both enumerations score exactly one tour, e.g.
        // {1,2,3}: (8 + 14 + 14) / 2 = 18.
        let pairwise = example_pairwise();
        let out = phi_m(&pairwise, 3).unwrap();
        assert_eq!(out.value(&[1, 2, 3]).unwrap(), &rat(18));
        assert_eq!(out, phi_m_naive(&pairwise, 3).unwrap());
    }

    #[test]
    fn tour_map_recovers_subtree_weights_on_random_trees() {
        let lengths: Vec<Rational> = (1..=6).map(rat).chain([ratio(1, 2), ratio(5, 3)]).collect();
        for seed in 0..8 {
            let tree = random_tree(7, seed, &lengths).unwrap();
            let pairwise = MVector::of_tree(&tree, 2).unwrap();
            for m in 3..=5 {
                assert_eq!(
                    phi_m(&pairwise, m).unwrap(),
                    MVector::of_tree(&tree, m).unwrap(),
                    "seed {seed}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn pruned_and_naive_agree_on_non_tree_input() {
        // Reversal pruning only needs symmetry, not any metric property, so
        // feed values that certainly come from no tree.
        let pairs = (1..=6usize)
            .combinations(2)
            .enumerate()
            .map(|(k, pair)| (pair, ratio(7 * k as i64 + 3, k as i64 % 3 + 1)))
            .collect::<Vec<_>>();
        let pairwise = MVector::from_values(6, 2, pairs).unwrap();
        for m in 2..=6 {
            assert_eq!(
                phi_m(&pairwise, m).unwrap(),
                phi_m_naive(&pairwise, m).unwrap(),
                "m = {m}"
            );
        }
    }

    #[test]
    fn full_subset_gives_total_tree_length() {
        let out = phi_m(&example_pairwise(), 5).unwrap();
        assert_eq!(out.value(&[1, 2, 3, 4, 5]).unwrap(), &rat(37));
    }

    #[test]
    fn raising_an_input_never_lowers_an_output() {
        let pairwise = example_pairwise();
        for bump in [rat(1), ratio(1, 3), rat(100)] {
            let raised = {
                let d = pairwise.to_matrix().unwrap();
                let bumped = d.with_entry(1, 2, d.get(1, 2) + &bump);
                MVector::from_matrix(&bumped).unwrap()
            };
            for m in 2..=5 {
                let before = phi_m(&pairwise, m).unwrap();
                let after = phi_m(&raised, m).unwrap();
                for ((subset, old), (_, new)) in before.iter().zip(after.iter()) {
                    assert!(new >= old, "m = {m}, subset {subset:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_non_pairwise_input_and_bad_m() {
        let pairwise = example_pairwise();
        let triples = phi_m(&pairwise, 3).unwrap();
        assert!(matches!(
            phi_m(&triples, 3),
            Err(TropicalError::NotPairwise(3))
        ));
        assert!(matches!(
            phi_m(&pairwise, 6),
            Err(TropicalError::Metric(MetricError::MOutOfRange { m: 6, n: 5 }))
        ));
        assert!(matches!(
            phi_m(&pairwise, 1),
            Err(TropicalError::Metric(MetricError::MOutOfRange { m: 1, n: 5 }))
        ));
    }
}
