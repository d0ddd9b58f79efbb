//! Degree certificates for the square witness on equidistant m-trees.
//!
//! The claim under test: for an equidistant tree on `m` leaves with generic
//! edge coefficients, the determinant of the square witness (rows `1`,
//! `x^(1)`, `(x^(1))^2`, `x^(2)`, ..., `x^(m-2)`) has degree equal to the
//! total edge length of the tree. The symbolic runner proves this for one
//! shape-and-heights choice outright by exhibiting a nonzero leading
//! coefficient polynomial `c_T`; the numeric runner spot checks larger `m`
//! where the symbolic determinant is too wide to expand comfortably.

use serde::Serialize;

use super::{build_conj3_matrix, CoefficientAssignment, VerifyError};
use crate::exact::rational::{rational_opt_str, rational_str};
use crate::exact::{rat, CoeffPoly, Rational};
use crate::trees::{realize_shape, TreeShape};

/// Internal-node heights `base^1, ..., base^count`. Successive powers keep
/// every node strictly below its parent for any shape fed to
/// [`realize_shape`] in post-order, and spread the exponent scales far
/// enough apart that unrelated tour sums never collide.
pub fn generic_heights(count: usize, base: u32) -> Vec<Rational> {
    let base = rat(i64::from(base));
    let mut out = Vec::with_capacity(count);
    let mut power = rat(1);
    for _ in 0..count {
        power = &power * &base;
        out.push(power.clone());
    }
    out
}

/// One fully symbolic determinant expansion.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolicConjectureRun {
    /// Nested-parenthesis code of the shape that was realized.
    pub shape_code: String,
    pub m: usize,
    #[serde(with = "rational_opt_str")]
    pub computed_degree: Option<Rational>,
    /// Total edge length of the realized tree.
    #[serde(with = "rational_str")]
    pub expected_degree: Rational,
    /// The leading coefficient `c_T`, a polynomial in the symbolic edge
    /// coefficients. Depends only on the shape, not on the heights.
    pub leading: CoeffPoly,
    pub term_count: usize,
    /// Degree shared by every monomial of `c_T`, when `c_T` is homogeneous.
    pub homogeneous_degree: Option<u32>,
    pub pass: bool,
}

/// One seeded numeric determinant evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct NumericConjectureRun {
    pub shape_code: String,
    pub m: usize,
    pub seed: u64,
    #[serde(with = "rational_opt_str")]
    pub computed_degree: Option<Rational>,
    #[serde(with = "rational_str")]
    pub expected_degree: Rational,
    /// The determinant's leading coefficient (a constant here). Zero
    /// would mean the whole determinant vanished for this seed.
    pub leading: CoeffPoly,
    pub pass: bool,
}

/// Realizes `shape` with the given internal heights, builds the square
/// witness with one fresh symbolic coefficient per family and edge, and
/// expands the determinant exactly.
pub fn conjecture3_symbolic(
    shape: &TreeShape,
    heights: &[Rational],
) -> Result<SymbolicConjectureRun, VerifyError> {
    let tree = realize_shape(shape, heights)?;
    let m = tree.n_leaves();
    if m < 3 {
        return Err(VerifyError::TooFewColumns(m));
    }
    let assignment = CoefficientAssignment::symbolic(m - 2, tree.tree().edges().len())?;
    let witness = build_conj3_matrix(&tree, &assignment, 1)?;
    let det = witness.matrix().determinant()?;
    let computed_degree = det.degree();
    let expected_degree = tree.tree().total_length();
    let leading = det
        .leading_coeff()
        .cloned()
        .unwrap_or_else(|| CoeffPoly::zero(assignment.vars()));
    let pass = computed_degree.as_ref() == Some(&expected_degree) && !leading.is_zero();
    Ok(SymbolicConjectureRun {
        shape_code: shape.encode(),
        m,
        computed_degree,
        expected_degree,
        term_count: leading.term_count(),
        homogeneous_degree: leading.homogeneous_degree(),
        leading,
        pass,
    })
}

/// Same determinant with coefficients drawn from a seeded generator
/// instead of symbols. A failing run is not a refutation -- the seed may
/// simply have hit the vanishing locus of `c_T` -- but a passing run is a
/// valid degree certificate for this tree.
pub fn conjecture3_numeric(
    shape: &TreeShape,
    heights: &[Rational],
    seed: u64,
) -> Result<NumericConjectureRun, VerifyError> {
    let tree = realize_shape(shape, heights)?;
    let m = tree.n_leaves();
    if m < 3 {
        return Err(VerifyError::TooFewColumns(m));
    }
    let assignment =
        CoefficientAssignment::seeded(m - 2, tree.tree().edges().len(), seed, 10_000)?;
    let witness = build_conj3_matrix(&tree, &assignment, 1)?;
    let det = witness.matrix().determinant()?;
    let computed_degree = det.degree();
    let expected_degree = tree.tree().total_length();
    let leading = det
        .leading_coeff()
        .cloned()
        .unwrap_or_else(|| CoeffPoly::zero(assignment.vars()));
    let pass = computed_degree.as_ref() == Some(&expected_degree) && !leading.is_zero();
    Ok(NumericConjectureRun {
        shape_code: shape.encode(),
        m,
        seed,
        computed_degree,
        expected_degree,
        leading,
        pass,
    })
}
