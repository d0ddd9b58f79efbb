//! Dense matrices over [`PuiseuxPoly`] with exact determinants.
//!
//! Division-free by construction: entries live in a polynomial ring, so
//! fraction-free elimination would still need exact division. Instead the
//! determinant is computed by signed permutation expansion for small sizes
//! and by dynamic programming over column subsets (Laplace expansion with
//! memoised minors, O(k^2 * 2^k) ring operations) beyond that.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::puiseux::PuiseuxPoly;
use super::varset::VarSet;
use super::ExactError;

/// Row-major matrix; all entries share one variable set.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    vars: VarSet,
    rows: usize,
    cols: usize,
    entries: Vec<PuiseuxPoly>,
}

/// Serializes as a list of rows, each a list of entry polynomials.
impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            let row: Vec<&PuiseuxPoly> =
                (0..self.cols).map(|c| self.entry(r, c)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Permutation expansion is k! terms; 6! = 720 is still cheap, 7! is not.
const PERMANENT_EXPANSION_MAX: usize = 6;

impl PolyMatrix {
    /// Builds from rows; every row must have the same length and every entry
    /// the same variable set.
    pub fn from_rows(rows: Vec<Vec<PuiseuxPoly>>) -> Result<Self, ExactError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        let mut vars: Option<VarSet> = None;
        for row in rows {
            if row.len() != ncols {
                return Err(ExactError::RaggedRows);
            }
            for e in row {
                match &vars {
                    None => vars = Some(e.vars().clone()),
                    Some(v) => {
                        if v != e.vars() {
                            return Err(ExactError::MismatchedVariables);
                        }
                    }
                }
                entries.push(e);
            }
        }
        Ok(PolyMatrix {
            vars: vars.unwrap_or_else(VarSet::empty),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn entry(&self, row: usize, col: usize) -> &PuiseuxPoly {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        &self.entries[row * self.cols + col]
    }

    /// Square submatrix on all rows and the given columns (order preserved,
    /// repeats allowed for testing degenerate cases).
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let entries = (0..self.rows)
            .flat_map(|r| cols.iter().map(move |&c| self.entry(r, c).clone()))
            .collect();
        PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    /// Applies `f` to every entry, e.g. a column rescale or an exponent
    /// substitution.
    pub fn map_entries<F>(&self, mut f: F) -> Self
    where
        F: FnMut(usize, usize, &PuiseuxPoly) -> PuiseuxPoly,
    {
        let entries = (0..self.rows)
            .flat_map(|r| {
                (0..self.cols)
                    .map(move |c| (r, c))
                    .collect::<Vec<_>>()
            })
            .map(|(r, c)| f(r, c, self.entry(r, c)))
            .collect();
        PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Exact determinant. Dispatches on size; both paths produce identical
    /// results (cross-checked in tests against a naive cofactor expansion).
    pub fn determinant(&self) -> Result<PuiseuxPoly, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(PuiseuxPoly::one(&self.vars));
        }
        if self.rows <= PERMANENT_EXPANSION_MAX {
            Ok(self.det_permutation_sum())
        } else {
            Ok(self.det_laplace_dp())
        }
    }

    /// Signed sum over all k! permutations.
    fn det_permutation_sum(&self) -> PuiseuxPoly {
        use itertools::Itertools;
        let k = self.rows;
        let mut det = PuiseuxPoly::zero(&self.vars);
        for perm in (0..k).permutations(k) {
            let mut prod = PuiseuxPoly::one(&self.vars);
            for (r, &c) in perm.iter().enumerate() {
                prod = prod.mul(self.entry(r, c)).expect("same variable set");
            }
            if permutation_parity(&perm) {
                det.accumulate(&prod, true);
            } else {
                det.accumulate(&prod, false);
            }
        }
        det
    }

    /// Laplace expansion along rows with minors memoised by column subset.
    /// `layer[mask]` holds the determinant of the submatrix on the first
    /// `popcount(mask)` rows and the column set `mask`.
    fn det_laplace_dp(&self) -> PuiseuxPoly {
        let k = self.rows;
        let full: usize = (1usize << k) - 1;
        let mut layer: Vec<Option<PuiseuxPoly>> = vec![None; 1 << k];
        layer[0] = Some(PuiseuxPoly::one(&self.vars));

        for row in 0..k {
            let mut next: Vec<Option<PuiseuxPoly>> = vec![None; 1 << k];
            for (mask, minor) in layer.iter().enumerate() {
                let Some(minor) = minor else { continue };
                if minor.is_zero() {
                    continue;
                }
                // Expand by placing `row` in each column not yet used.
                let mut position = 0usize; // rank of column within the new mask
                for col in 0..k {
                    let bit = 1usize << col;
                    if mask & bit != 0 {
                        position += 1;
                        continue;
                    }
                    let e = self.entry(row, col);
                    if e.is_zero() {
                        continue;
                    }
                    let term = minor.mul(e).expect("same variable set");
                    let negate = (row + position) % 2 == 1;
                    let slot = &mut next[mask | bit];
                    match slot {
                        Some(acc) => acc.accumulate(&term, negate),
                        None => {
                            *slot = Some(if negate { term.neg() } else { term });
                        }
                    }
                }
            }
            layer = next;
        }

        layer[full]
            .take()
            .unwrap_or_else(|| PuiseuxPoly::zero(&self.vars))
    }

    /// Naive recursive cofactor expansion along the first row. Exponential;
    /// kept as an independent oracle for the two production algorithms.
    #[doc(hidden)]
    pub fn det_cofactor_oracle(&self) -> Result<PuiseuxPoly, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        fn rec(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> PuiseuxPoly {
            if rows.is_empty() {
                return PuiseuxPoly::one(&m.vars);
            }
            let r = rows[0];
            let rest: Vec<usize> = rows[1..].to_vec();
            let mut det = PuiseuxPoly::zero(&m.vars);
            for (j, &c) in cols.iter().enumerate() {
                let e = m.entry(r, c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .copied()
                    .filter(|&x| x != c)
                    .collect();
                let minor = rec(m, &rest, &sub_cols);
                let term = minor.mul(e).expect("same variable set");
                det.accumulate(&term, j % 2 == 1);
            }
            det
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(rec(self, &idx, &idx))
    }
}

/// True for odd permutations (counts inversions).
fn permutation_parity(perm: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}
