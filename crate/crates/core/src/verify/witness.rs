//! Witness matrices over Puiseux polynomials and their transformations.

use serde::Serialize;

use super::{CoefficientAssignment, VerifyError};
use crate::exact::{rat, CoeffPoly, PolyMatrix, PuiseuxPoly, Rational};
use crate::trees::EquidistantTree;

/// Which construction produced a witness matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Construction {
    /// Rows `(1, x_i, x_i^2, y_i)` over an equidistant tree plus an anchor
    /// column `(1, t^{2E}, t^{4E}, t^{2E})`; exponent scale 2.
    Theorem5,
    /// Square rows `(1, x^(1), (x^(1))^2, x^(2), ..., x^(m-2))` over an
    /// equidistant m-tree; no anchor column.
    Conjecture3,
    /// Rows `(x^(1), ..., x^(m))` with no row of ones, used only to exhibit
    /// the root-containment failure.
    RemarkN,
}

/// A built witness matrix plus the provenance needed to interpret minors.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessMatrix {
    matrix: PolyMatrix,
    construction: Construction,
    scale: u32,
    /// Column labels, in column order (leaf labels; the anchor, when
    /// present, is labeled one past the largest leaf).
    labels: Vec<usize>,
    anchor: Option<usize>,
}

impl WitnessMatrix {
    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Label of the anchor column, if this construction has one.
    pub fn anchor(&self) -> Option<usize> {
        self.anchor
    }

    /// The maximal minor on the given column labels (in the given order).
    pub fn minor(&self, subset: &[usize]) -> Result<PolyMatrix, VerifyError> {
        let positions = subset
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or(VerifyError::Tree(crate::trees::TreeError::UnknownLeaf(*l)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.matrix.select_columns(&positions))
    }
}

/// The truncated Puiseux polynomial attached to a leaf: the sum of
/// `a_family(e) * t^(scale * h(e))` over the edges `e` of the root-to-leaf
/// path, where `h(e)` is the edge height.
pub fn leaf_series(
    tree: &EquidistantTree,
    assignment: &CoefficientAssignment,
    leaf: usize,
    family: usize,
    scale: u32,
) -> Result<PuiseuxPoly, VerifyError> {
    check_scale(scale)?;
    check_coverage(tree, assignment)?;
    let mut acc = PuiseuxPoly::zero(assignment.vars());
    for edge in tree.root_path_edges(leaf)? {
        let exponent = tree.edge_height(edge) * rat(i64::from(scale));
        let term = PuiseuxPoly::monomial(exponent, assignment.coefficient(family, edge)?);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// The anchored 4-row witness: columns `(1, x_i, x_i^2, y_i)` for each leaf
/// `i` of `tree` (family 1 giving `x`, family 2 giving `y`, scale 2), plus
/// a final column `(1, t^{2E}, t^{4E}, t^{2E})` labeled `n_leaves + 1`.
/// Requires `e` strictly above the root height.
pub fn build_thm5_matrix(
    tree: &EquidistantTree,
    e: &Rational,
    assignment: &CoefficientAssignment,
) -> Result<WitnessMatrix, VerifyError> {
    if assignment.families() < 2 {
        return Err(VerifyError::FamilyNotCovered {
            family: 2,
            families: assignment.families(),
        });
    }
    check_coverage(tree, assignment)?;
    if e <= tree.root_height() {
        return Err(VerifyError::AnchorBelowRoot {
            e: e.clone(),
            f: tree.root_height().clone(),
        });
    }
    let scale = 2;
    let vars = assignment.vars();
    let k = tree.n_leaves();
    let mut ones = Vec::with_capacity(k + 1);
    let mut xs = Vec::with_capacity(k + 1);
    let mut squares = Vec::with_capacity(k + 1);
    let mut ys = Vec::with_capacity(k + 1);
    for leaf in 1..=k {
        let x = leaf_series(tree, assignment, leaf, 1, scale)?;
        let y = leaf_series(tree, assignment, leaf, 2, scale)?;
        ones.push(PuiseuxPoly::one(vars));
        squares.push(x.square());
        xs.push(x);
        ys.push(y);
    }
    let unit = |exp: Rational| PuiseuxPoly::monomial(exp, CoeffPoly::constant(vars, rat(1)));
    let two_e = e * rat(2);
    ones.push(PuiseuxPoly::one(vars));
    xs.push(unit(two_e.clone()));
    squares.push(unit(&two_e * rat(2)));
    ys.push(unit(two_e));
    Ok(WitnessMatrix {
        matrix: PolyMatrix::from_rows(vec![ones, xs, squares, ys])?,
        construction: Construction::Theorem5,
        scale,
        labels: (1..=k + 1).collect(),
        anchor: Some(k + 1),
    })
}

/// The square m-row witness on an equidistant m-tree: rows
/// `(1, x^(1), (x^(1))^2, x^(2), ..., x^(m-2))`, family `j` giving
/// `x^(j)`. `scale` must be 1 (the conjecture's convention) or 2.
pub fn build_conj3_matrix(
    tree: &EquidistantTree,
    assignment: &CoefficientAssignment,
    scale: u32,
) -> Result<WitnessMatrix, VerifyError> {
    check_scale(scale)?;
    let m = tree.n_leaves();
    if m < 3 {
        return Err(VerifyError::TooFewColumns(m));
    }
    if assignment.families() < m - 2 {
        return Err(VerifyError::FamilyNotCovered {
            family: m - 2,
            families: assignment.families(),
        });
    }
    check_coverage(tree, assignment)?;
    let vars = assignment.vars();
    let first: Vec<PuiseuxPoly> = (1..=m)
        .map(|leaf| leaf_series(tree, assignment, leaf, 1, scale))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(m);
    rows.push(vec![PuiseuxPoly::one(vars); m]);
    rows.push(first.clone());
    rows.push(first.iter().map(PuiseuxPoly::square).collect());
    for family in 2..=m - 2 {
        rows.push(
            (1..=m)
                .map(|leaf| leaf_series(tree, assignment, leaf, family, scale))
                .collect::<Result<_, _>>()?,
        );
    }
    Ok(WitnessMatrix {
        matrix: PolyMatrix::from_rows(rows)?,
        construction: Construction::Conjecture3,
        scale,
        labels: (1..=m).collect(),
        anchor: None,
    })
}

/// Multiplies column `c` by `t^exponents[c]` for every column. Minor
/// degrees shift by the sum of the selected columns' exponents; this is
/// how shifted-tree degrees are converted back to original distances.
pub fn rescale_columns(w: &WitnessMatrix, exponents: &[Rational]) -> WitnessMatrix {
    assert_eq!(
        exponents.len(),
        w.matrix.cols(),
        "one exponent per column"
    );
    WitnessMatrix {
        matrix: w
            .matrix
            .map_entries(|_, c, entry| entry.shift_exponents(&exponents[c])),
        construction: w.construction.clone(),
        scale: w.scale,
        labels: w.labels.clone(),
        anchor: w.anchor,
    }
}

/// Substitutes `t -> t^(-1/2)` in every entry. Afterwards minus the
/// valuation of each minor equals what its half-degree was before, which
/// turns degree certificates into the valuation form used for tropical
/// membership.
pub fn to_valuation_witness(w: &WitnessMatrix) -> WitnessMatrix {
    let half_flip = Rational::new((-1).into(), 2.into());
    WitnessMatrix {
        matrix: w.matrix.map_entries(|_, _, entry| {
            entry
                .substitute_scale(&half_flip)
                .expect("-1/2 is a valid scale")
        }),
        construction: w.construction.clone(),
        scale: w.scale,
        labels: w.labels.clone(),
        anchor: w.anchor,
    }
}

fn check_scale(scale: u32) -> Result<(), VerifyError> {
    if scale == 1 || scale == 2 {
        Ok(())
    } else {
        Err(VerifyError::BadScale(scale))
    }
}

fn check_coverage(
    tree: &EquidistantTree,
    assignment: &CoefficientAssignment,
) -> Result<(), VerifyError> {
    let need = tree.tree().edges().len();
    if assignment.edge_count() != need {
        return Err(VerifyError::WrongEdgeCount {
            need,
            got: assignment.edge_count(),
        });
    }
    Ok(())
}
