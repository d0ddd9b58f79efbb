//! Symmetric dissimilarity matrices and their membership conditions.

use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::rational::rational_seq;
use crate::exact::{parse_rational, Rational};
use crate::trees::WeightedTree;

use super::MetricError;

/// Symmetric matrix of exact rationals with a zero diagonal, indexed by
/// leaf labels `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DissimilarityMatrix {
    n: usize,
    entries: Vec<Rational>, // dense n*n, kept symmetric
}

/// A quadruple on which the four-point condition fails: among the three
/// pairings, a unique one is strictly maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourPointViolation {
    /// Indices `(i, j, k, l)`, not necessarily distinct.
    pub quadruple: [usize; 4],
    /// `D(i,j)+D(k,l)`, `D(i,k)+D(j,l)`, `D(i,l)+D(j,k)`.
    #[serde(serialize_with = "rational_seq::serialize")]
    pub sums: [Rational; 3],
}

impl fmt::Display for FourPointViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.quadruple;
        let [a, b, c] = &self.sums;
        write!(
            f,
            "({i},{j},{k},{l}) gives pairings {a}, {b}, {c}; the maximum is attained only once"
        )
    }
}

/// A triple on which the three-point (ultrametric) condition fails: a
/// unique side is strictly maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UltrametricViolation {
    pub triple: [usize; 3],
    /// `D(i,j)`, `D(i,k)`, `D(j,k)`.
    #[serde(serialize_with = "rational_seq::serialize")]
    pub sides: [Rational; 3],
}

impl fmt::Display for UltrametricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k] = self.triple;
        let [a, b, c] = &self.sides;
        write!(
            f,
            "({i},{j},{k}) gives sides {a}, {b}, {c}; the maximum is attained only once"
        )
    }
}

/// Serde wire form: rows of rational strings.
#[derive(Serialize, Deserialize)]
struct MatrixWire {
    n: usize,
    rows: Vec<Vec<String>>,
}

impl DissimilarityMatrix {
    /// Builds from a full square table, validating symmetry and the zero
    /// diagonal.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let n = rows.len();
        if n == 0 {
            return Err(MetricError::BadMatrix("matrix is empty".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::BadMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(MetricError::BadMatrix(format!(
                    "diagonal entry ({},{}) is {}, not 0",
                    i + 1,
                    i + 1,
                    row[i]
                )));
            }
            for (j, entry) in row.iter().enumerate().take(i) {
                if *entry != rows[j][i] {
                    return Err(MetricError::BadMatrix(format!(
                        "entries ({},{}) = {} and ({},{}) = {} differ",
                        i + 1,
                        j + 1,
                        entry,
                        j + 1,
                        i + 1,
                        rows[j][i]
                    )));
                }
            }
        }
        Ok(DissimilarityMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Exact pairwise leaf distances of a tree.
    pub fn from_tree(tree: &WeightedTree) -> Result<Self, MetricError> {
        let n = tree.n_leaves();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for i in 1..=n {
            for j in (i + 1)..=n {
                let d = tree.leaf_distance(i, j)?;
                rows[i - 1][j - 1] = d.clone();
                rows[j - 1][i - 1] = d;
            }
        }
        Self::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `D(i, j)` for 1-based labels.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "labels ({i},{j}) out of range 1..={}",
            self.n
        );
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Copy with one symmetric pair replaced (diagonal is immutable).
    pub fn with_entry(&self, i: usize, j: usize, value: Rational) -> Self {
        assert!(i != j, "diagonal entries stay zero");
        let mut out = self.clone();
        out.entries[(i - 1) * self.n + (j - 1)] = value.clone();
        out.entries[(j - 1) * self.n + (i - 1)] = value;
        out
    }

    /// First quadruple (in lexicographic order over not-necessarily-distinct
    /// `i <= j <= k <= l`) where the maximum of the three pairings is
    /// attained only once, or `None` if `D` is a tree metric. Degenerate
    /// quadruples make this subsume the triangle inequality and
    /// nonnegativity.
    pub fn four_point_violation(&self) -> Option<FourPointViolation> {
        let quadruples: Vec<Vec<usize>> =
            (1..=self.n).combinations_with_replacement(4).collect();
        quadruples
            .par_iter()
            .find_map_first(|q| self.check_quadruple(q[0], q[1], q[2], q[3]))
    }

    fn check_quadruple(
        &self,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
    ) -> Option<FourPointViolation> {
        let sums = [
            self.get(i, j) + self.get(k, l),
            self.get(i, k) + self.get(j, l),
            self.get(i, l) + self.get(j, k),
        ];
        if max_attained_twice(&sums) {
            None
        } else {
            Some(FourPointViolation {
                quadruple: [i, j, k, l],
                sums,
            })
        }
    }

    /// Whether the matrix is realizable by a weighted tree.
    pub fn is_tree_metric(&self) -> bool {
        self.four_point_violation().is_none()
    }

    /// First triple `i < j < k` drawn from `subset` (1-based labels) where
    /// the maximum of the three sides is attained only once. Repeated
    /// indices never violate the condition, so distinct triples suffice.
    pub fn ultrametric_violation(&self, subset: &[usize]) -> Option<UltrametricViolation> {
        for (&i, &j, &k) in subset.iter().tuple_combinations() {
            let sides = [
                self.get(i, j).clone(),
                self.get(i, k).clone(),
                self.get(j, k).clone(),
            ];
            if !max_attained_twice(&sides) {
                return Some(UltrametricViolation {
                    triple: [i, j, k],
                    sides,
                });
            }
        }
        None
    }

    pub fn is_ultrametric(&self, subset: &[usize]) -> bool {
        self.ultrametric_violation(subset).is_none()
    }

    /// All labels `1..=n`, the usual subset for the ultrametric check.
    pub fn all_labels(&self) -> Vec<usize> {
        (1..=self.n).collect()
    }

    /// Largest distance from any leaf to the anchor leaf `n`.
    pub fn max_anchor_distance(&self) -> Rational {
        (1..self.n)
            .map(|i| self.get(i, self.n).clone())
            .max()
            .expect("n >= 2")
    }

    /// The anchored shift `D'(i,j) = 2E + D(i,j) - D(i,n) - D(j,n)` for
    /// `i, j != n`, with `D'(i,n) = 2E`. Requires `E >= max_i D(i,n)`;
    /// passing `None` uses that maximum. Returns the shifted matrix and the
    /// constant actually used. If `D` is a tree metric, the restriction of
    /// `D'` to `1..n-1` is an ultrametric.
    pub fn ultrametric_shift(
        &self,
        e: Option<&Rational>,
    ) -> Result<(DissimilarityMatrix, Rational), MetricError> {
        if self.n < 2 {
            return Err(MetricError::BadMatrix(
                "shift needs at least 2 points".into(),
            ));
        }
        let required = self.max_anchor_distance();
        let e = match e {
            Some(e) => {
                if e < &required {
                    return Err(MetricError::ShiftBoundTooSmall {
                        given: e.clone(),
                        required,
                    });
                }
                e.clone()
            }
            None => required,
        };
        let two_e = &e + &e;
        let n = self.n;
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                rows[i - 1][j - 1] = if i == n || j == n {
                    two_e.clone()
                } else {
                    &two_e + self.get(i, j) - self.get(i, n) - self.get(j, n)
                };
            }
        }
        Ok((Self::from_rows(rows)?, e))
    }

    /// The principal submatrix on the given labels, relabeled `1..=k` in
    /// the order supplied. Labels must be distinct and in range.
    pub fn restrict(&self, labels: &[usize]) -> Result<DissimilarityMatrix, MetricError> {
        for (pos, &l) in labels.iter().enumerate() {
            if l < 1 || l > self.n {
                return Err(MetricError::BadSubset(format!(
                    "label {l} out of range 1..={}",
                    self.n
                )));
            }
            if labels[..pos].contains(&l) {
                return Err(MetricError::BadSubset(format!("label {l} repeated")));
            }
        }
        let rows = labels
            .iter()
            .map(|&i| labels.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// CSV: one row per line, entries as exact rationals.
    pub fn to_csv(&self) -> String {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entries[i * self.n + j].to_string())
                    .join(",")
            })
            .join("\n")
    }

    pub fn from_csv(text: &str) -> Result<Self, MetricError> {
        let rows: Vec<Vec<Rational>> = text
            .lines()
            .filter(|line| !line.trim().is_empty())
            .map(|line| {
                line.split(',')
                    .map(|cell| {
                        parse_rational(cell).map_err(|e| MetricError::Parse(e.to_string()))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Self::from_rows(rows)
    }
}

impl Serialize for DissimilarityMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entries[i * self.n + j].to_string())
                    .collect()
            })
            .collect();
        MatrixWire { n: self.n, rows }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DissimilarityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        if wire.rows.len() != wire.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but got {} rows",
                wire.n,
                wire.rows.len()
            )));
        }
        let rows: Result<Vec<Vec<Rational>>, _> = wire
            .rows
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect())
            .collect();
        let rows = rows.map_err(serde::de::Error::custom)?;
        Self::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Whether the maximum of three values occurs at least twice.
pub(crate) fn max_attained_twice(values: &[Rational; 3]) -> bool {
    let max = values.iter().max().expect("nonempty");
    values.iter().filter(|v| *v == max).count() >= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fixtures::example_5tree;

    fn constant_matrix(n: usize, value: i64) -> DissimilarityMatrix {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { rat(0) } else { rat(value) })
                    .collect()
            })
            .collect();
        DissimilarityMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(
            DissimilarityMatrix::from_rows(vec![vec![rat(1)]]),
            Err(MetricError::BadMatrix(_))
        ));
        assert!(matches!(
            DissimilarityMatrix::from_rows(vec![
                vec![rat(0), rat(1)],
                vec![rat(2), rat(0)],
            ]),
            Err(MetricError::BadMatrix(_))
        ));
        assert!(matches!(
            DissimilarityMatrix::from_rows(vec![vec![rat(0), rat(1)]]),
            Err(MetricError::BadMatrix(_))
        ));
    }

    #[test]
    fn constant_matrix_passes_four_point() {
        // All three pairings equal 2 * value on every quadruple.
        assert!(constant_matrix(4, 2).four_point_violation().is_none());
    }

    #[test]
    fn tree_distances_pass_four_point() {
        let d = DissimilarityMatrix::from_tree(example_5tree().tree()).unwrap();
        assert!(d.is_tree_metric());
    }

    #[test]
    fn four_point_catches_violations() {
        // Every triangle holds, but on (1,2,3,4) the pairings are
        // 2+2 = 4, 4+3 = 7, 3+3 = 6: the maximum 7 is attained once.
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(2), rat(4), rat(3)],
            vec![rat(2), rat(0), rat(3), rat(3)],
            vec![rat(4), rat(3), rat(0), rat(2)],
            vec![rat(3), rat(3), rat(2), rat(0)],
        ])
        .unwrap();
        let v = d.four_point_violation().expect("should violate");
        assert_eq!(v.quadruple, [1, 2, 3, 4]);
        assert_eq!(v.sums, [rat(4), rat(7), rat(6)]);
    }

    #[test]
    fn degenerate_quadruples_catch_triangle_and_negativity() {
        // Triangle violation: D(1,2) = 10 > D(1,3) + D(2,3) = 4.
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(10), rat(2)],
            vec![rat(10), rat(0), rat(2)],
            vec![rat(2), rat(2), rat(0)],
        ])
        .unwrap();
        let v = d.four_point_violation().expect("triangle fails");
        // The witness uses a repeated index.
        let [i, j, k, l] = v.quadruple;
        assert!(i == j || j == k || k == l || i == k || j == l || i == l);

        // Negative entry via (i,i,j,j).
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), -rat(1)],
            vec![-rat(1), rat(0)],
        ])
        .unwrap();
        assert!(d.four_point_violation().is_some());
    }

    #[test]
    fn ultrametric_three_point() {
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(2), rat(3)],
            vec![rat(2), rat(0), rat(3)],
            vec![rat(3), rat(3), rat(0)],
        ])
        .unwrap();
        assert!(d.is_ultrametric(&d.all_labels()));

        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(1), rat(2)],
            vec![rat(1), rat(0), rat(3)],
            vec![rat(2), rat(3), rat(0)],
        ])
        .unwrap();
        let v = d.ultrametric_violation(&d.all_labels()).unwrap();
        assert_eq!(v.triple, [1, 2, 3]);
        assert_eq!(v.sides, [rat(1), rat(2), rat(3)]);
    }

    #[test]
    fn equidistant_tree_distances_are_ultrametric() {
        let d = DissimilarityMatrix::from_tree(example_5tree().tree()).unwrap();
        assert!(d.is_ultrametric(&d.all_labels()));
    }

    #[test]
    fn shift_formula() {
        // Path metric on 3 points (1 - 2 - 3 with unit-ish lengths):
        // D(1,2)=2, D(1,3)=3, D(2,3)=3; anchor 3, E = 3.
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(2), rat(3)],
            vec![rat(2), rat(0), rat(3)],
            vec![rat(3), rat(3), rat(0)],
        ])
        .unwrap();
        let (shifted, e) = d.ultrametric_shift(Some(&rat(3))).unwrap();
        assert_eq!(e, rat(3));
        assert_eq!(shifted.get(1, 2), &rat(2));
        assert_eq!(shifted.get(1, 3), &rat(6));
        assert_eq!(shifted.get(2, 3), &rat(6));
        assert!(shifted.is_ultrametric(&[1, 2]));

        // Default E is the max anchor distance.
        let (_, e) = d.ultrametric_shift(None).unwrap();
        assert_eq!(e, rat(3));

        // Too-small E is rejected.
        assert!(matches!(
            d.ultrametric_shift(Some(&rat(2))),
            Err(MetricError::ShiftBoundTooSmall { .. })
        ));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let d = DissimilarityMatrix::from_tree(example_5tree().tree()).unwrap();
        let csv = d.to_csv();
        assert_eq!(DissimilarityMatrix::from_csv(&csv).unwrap(), d);

        let json = serde_json::to_string(&d).unwrap();
        let back: DissimilarityMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
