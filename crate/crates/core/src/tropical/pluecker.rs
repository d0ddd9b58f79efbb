//! Three-term tropical Pluecker conditions on m-subset vectors.
//!
//! For a common (m-2)-subset `S` and four further indices `i < j < k < l`,
//! the three-term relation compares
//!
//! ```text
//! X(S+ij) + X(S+kl),   X(S+ik) + X(S+jl),   X(S+il) + X(S+jk)
//! ```
//!
//! and holds when the maximum is attained at least twice. For m = 2 these
//! conditions characterize the vectors realizable by weighted trees; for
//! m >= 3 they are necessary but not known to be sufficient, so a clean
//! scan here must not be read as a membership certificate.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use serde::Serialize;

use super::poly::{coordinate_name, trop_eval, TropicalPolynomial, TropicalTerm};
use crate::exact::rational::rational_seq;
use crate::exact::Rational;
use crate::metrics::{max_attained_twice, DissimilarityMatrix, MVector};
use num_traits::Zero;

/// A witness that a three-term Pluecker condition fails: for this common
/// subset and quadruple, one pairing is strictly larger than both others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlueckerViolation {
    /// The common (m-2)-subset `S`; empty when m = 2.
    pub common: Vec<usize>,
    /// The four indices `i < j < k < l`, disjoint from `common`.
    pub quadruple: [usize; 4],
    /// `X(S+ij)+X(S+kl)`, `X(S+ik)+X(S+jl)`, `X(S+il)+X(S+jk)`.
    #[serde(serialize_with = "rational_seq::serialize")]
    pub sums: [Rational; 3],
}

impl fmt::Display for PlueckerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.quadruple;
        let [a, b, c] = &self.sums;
        if !self.common.is_empty() {
            write!(f, "common subset {:?} with ", self.common)?;
        }
        write!(
            f,
            "({i},{j},{k},{l}) gives pairings {a}, {b}, {c}; the maximum is attained only once"
        )
    }
}

/// Scans every three-term condition on `v`, returning the first violation
/// in lexicographic order of (common subset, quadruple), or `None` if all
/// conditions hold. With n < m + 2 there is nothing to check and the scan
/// passes vacuously.
pub fn pluecker_3term_scan(v: &MVector) -> Option<PlueckerViolation> {
    let n = v.n();
    let m = v.m();
    if n < m + 2 {
        return None;
    }
    let commons: Vec<Vec<usize>> = (1..=n).combinations(m - 2).collect();
    commons.par_iter().find_map_first(|s| scan_common(v, s))
}

fn scan_common(v: &MVector, s: &[usize]) -> Option<PlueckerViolation> {
    let complement: Vec<usize> = (1..=v.n()).filter(|x| !s.contains(x)).collect();
    for quad in complement.iter().copied().combinations(4) {
        let [i, j, k, l] = [quad[0], quad[1], quad[2], quad[3]];
        let sums = [
            coordinate(v, s, i, j) + coordinate(v, s, k, l),
            coordinate(v, s, i, k) + coordinate(v, s, j, l),
            coordinate(v, s, i, l) + coordinate(v, s, j, k),
        ];
        if !max_attained_twice(&sums) {
            return Some(PlueckerViolation {
                common: s.to_vec(),
                quadruple: [i, j, k, l],
                sums,
            });
        }
    }
    None
}

fn coordinate(v: &MVector, s: &[usize], a: usize, b: usize) -> Rational {
    let mut subset = Vec::with_capacity(s.len() + 2);
    subset.extend_from_slice(s);
    subset.push(a);
    subset.push(b);
    subset.sort_unstable();
    v.value(&subset)
        .expect("subset built from valid disjoint labels")
        .clone()
}

/// Membership of pairwise data in the m = 2 tropical Pluecker prevariety,
/// decided through the corner-locus machinery: each relation becomes a
/// three-term max-plus polynomial which must have its maximum attained
/// twice at the point `x_i_j = D(i,j)`.
///
/// On metrics this agrees with the four-point condition over distinct
/// quadruples; degenerate quadruples (which encode the triangle inequality
/// and nonnegativity) have no Pluecker coordinate and are out of scope
/// here. With n < 4 there are no quadruples and membership holds vacuously.
pub fn grassmannian2_membership(d: &DissimilarityMatrix) -> bool {
    grassmannian2_violation(d).is_none()
}

/// Like [`grassmannian2_membership`] but returns the first failing
/// quadruple as a witness, in lexicographic order.
pub fn grassmannian2_violation(d: &DissimilarityMatrix) -> Option<PlueckerViolation> {
    let n = d.n();
    let point: BTreeMap<String, Rational> = (1..=n)
        .combinations(2)
        .map(|pair| (coordinate_name(&pair), d.get(pair[0], pair[1]).clone()))
        .collect();
    let quadruples: Vec<Vec<usize>> = (1..=n).combinations(4).collect();
    quadruples
        .par_iter()
        .find_map_first(|quad| {
            let [i, j, k, l] = [quad[0], quad[1], quad[2], quad[3]];
            let poly = pluecker_polynomial(i, j, k, l);
            let result =
                trop_eval(&poly, &point).expect("point contains every pair coordinate");
            if result.is_corner() {
                None
            } else {
                let sums = poly
                    .term_values(&point)
                    .expect("point contains every pair coordinate");
                Some(PlueckerViolation {
                    common: Vec::new(),
                    quadruple: [i, j, k, l],
                    sums: [sums[0].clone(), sums[1].clone(), sums[2].clone()],
                })
            }
        })
}

/// The tropicalization of the classical relation
/// `p_ij p_kl - p_ik p_jl + p_il p_jk`: all coefficients are units, so every
/// term carries constant 0.
fn pluecker_polynomial(i: usize, j: usize, k: usize, l: usize) -> TropicalPolynomial {
    let pair = |a: usize, b: usize| coordinate_name(&[a, b]);
    let term = |p1: String, p2: String| TropicalTerm {
        constant: Rational::zero(),
        exponents: [(p1, 1), (p2, 1)].into_iter().collect(),
    };
    TropicalPolynomial::new(vec![
        term(pair(i, j), pair(k, l)),
        term(pair(i, k), pair(j, l)),
        term(pair(i, l), pair(j, k)),
    ])
    .expect("three terms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fixtures::example_5tree;
    use crate::metrics::MVector;
    use crate::trees::random_tree;
    use crate::tropical::phi_m;

    #[test]
    fn tree_pairwise_data_passes_both_routes() {
        let tree = example_5tree();
        let d = DissimilarityMatrix::from_tree(tree.tree()).unwrap();
        let v = MVector::from_matrix(&d).unwrap();
        assert_eq!(pluecker_3term_scan(&v), None);
        assert!(grassmannian2_membership(&d));
    }

    #[test]
    fn constant_matrix_passes() {
        // All pairings are equal, so every maximum ties three ways.
        let rows = (0..4)
            .map(|r| (0..4).map(|c| rat(if r == c { 0 } else { 2 })).collect())
            .collect();
        let d = DissimilarityMatrix::from_rows(rows).unwrap();
        assert!(grassmannian2_membership(&d));
        assert_eq!(pluecker_3term_scan(&MVector::from_matrix(&d).unwrap()), None);
    }

    #[test]
    fn large_bump_is_caught_with_the_same_witness_on_both_routes() {
        let tree = example_5tree();
        let d = DissimilarityMatrix::from_tree(tree.tree()).unwrap();
        let bumped = d.with_entry(4, 5, d.get(4, 5) + &rat(100));
        // Quadruples not involving both 4 and 5 are untouched; the first
        // affected one in lexicographic order is (1,2,4,5), where the
        // pairing D(1,2)+D(4,5) = 8 + 112 dominates 20+20 and 20+20.
        let expected = PlueckerViolation {
            common: Vec::new(),
            quadruple: [1, 2, 4, 5],
            sums: [rat(120), rat(40), rat(40)],
        };
        let scan = pluecker_3term_scan(&MVector::from_matrix(&bumped).unwrap()).unwrap();
        assert_eq!(scan, expected);
        assert_eq!(grassmannian2_violation(&bumped).unwrap(), expected);
        assert!(!grassmannian2_membership(&bumped));
    }

    #[test]
    fn pairwise_scan_matches_the_tropical_route_on_random_data() {
        // Perturbations add more than twice the largest entry, which always
        // breaks a distinct quadruple when n >= 4, keeping the two routes
        // (and the four-point condition) in agreement on this corpus.
        let lengths: Vec<Rational> = (1..=5).map(rat).collect();
        for seed in 0..10 {
            let tree = random_tree(6, seed, &lengths).unwrap();
            let d = DissimilarityMatrix::from_tree(&tree).unwrap();
            let bump = d.max_anchor_distance() * rat(4);
            let target = (seed as usize % 5) + 2;
            let bumped = d.with_entry(1, target, d.get(1, target) + &bump);
            for matrix in [&d, &bumped] {
                let scan_clean =
                    pluecker_3term_scan(&MVector::from_matrix(matrix).unwrap()).is_none();
                assert_eq!(scan_clean, grassmannian2_membership(matrix));
                assert_eq!(scan_clean, matrix.is_tree_metric());
            }
            assert!(!grassmannian2_membership(&bumped));
        }
    }

    #[test]
    fn tour_map_images_satisfy_the_higher_conditions() {
        let lengths: Vec<Rational> = (1..=4).map(rat).collect();
        for seed in 20..26 {
            let tree = random_tree(7, seed, &lengths).unwrap();
            let pairwise = MVector::of_tree(&tree, 2).unwrap();
            for m in [3, 4, 5] {
                let image = phi_m(&pairwise, m).unwrap();
                assert_eq!(pluecker_3term_scan(&image), None, "seed {seed}, m = {m}");
            }
        }
    }

    #[test]
    fn higher_scan_catches_a_bumped_coordinate() {
        let tree = example_5tree();
        let pairwise = MVector::of_tree(tree.tree(), 2).unwrap();
        let triples = phi_m(&pairwise, 3).unwrap();
        let bumped = triples
            .with_value(&[1, 2, 3], triples.value(&[1, 2, 3]).unwrap() + &rat(1000))
            .unwrap();
        // First in scan order is S = {1} with quadruple (2,3,4,5), where
        // X{123} + X{145} = 1018 + 26 towers over 24 + 27 twice.
        let witness = pluecker_3term_scan(&bumped).unwrap();
        assert_eq!(witness.common, vec![1]);
        assert_eq!(witness.quadruple, [2, 3, 4, 5]);
        assert_eq!(witness.sums, [rat(1044), rat(51), rat(51)]);
        let shown = witness.to_string();
        assert!(shown.contains("common subset [1]"), "{shown}");
        assert!(shown.contains("attained only once"), "{shown}");
    }

    #[test]
    fn scan_is_vacuous_when_no_quadruple_fits() {
        // n = 5, m = 4 leaves only three indices outside the common set.
        let tree = example_5tree();
        let pairwise = MVector::of_tree(tree.tree(), 2).unwrap();
        for m in [4, 5] {
            let image = phi_m(&pairwise, m).unwrap();
            assert_eq!(pluecker_3term_scan(&image), None);
        }
    }
}
