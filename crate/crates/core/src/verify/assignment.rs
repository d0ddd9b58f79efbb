//! Coefficient assignments: one number (or variable) per tree edge and
//! row family.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VerifyError;
use crate::exact::{rat, CoeffPoly, Rational, VarSet};

/// Coefficients `a_j(e)` indexed by row family `j` (1-based) and edge
/// index `e` of the target tree.
///
/// Numeric assignments hold exact rationals and produce constant
/// coefficient polynomials; symbolic assignments make every `(j, e)` pair a
/// distinct variable named `a{j}_e{e}`, ordered family-major, so that
/// leading coefficients come out as honest multivariate polynomials.
#[derive(Debug, Clone)]
pub struct CoefficientAssignment {
    families: usize,
    edges: usize,
    vars: VarSet,
    numeric: Option<Vec<Vec<Rational>>>,
}

impl CoefficientAssignment {
    /// Numeric assignment from `values[family - 1][edge]`.
    pub fn numeric(values: Vec<Vec<Rational>>) -> Result<Self, VerifyError> {
        let families = values.len();
        let edges = values.first().map_or(0, Vec::len);
        if families == 0 || edges == 0 {
            return Err(VerifyError::EmptyAssignment);
        }
        if values.iter().any(|row| row.len() != edges) {
            return Err(VerifyError::RaggedAssignment);
        }
        Ok(Self {
            families,
            edges,
            vars: VarSet::empty(),
            numeric: Some(values),
        })
    }

    /// Fully symbolic assignment over `families * edges` fresh variables.
    pub fn symbolic(families: usize, edges: usize) -> Result<Self, VerifyError> {
        if families == 0 || edges == 0 {
            return Err(VerifyError::EmptyAssignment);
        }
        let names = (1..=families)
            .flat_map(|j| (0..edges).map(move |e| format!("a{j}_e{e}")))
            .collect::<Vec<_>>();
        Ok(Self {
            families,
            edges,
            vars: VarSet::new(names),
            numeric: None,
        })
    }

    /// Seeded draw of nonzero integers from `[-max_abs, max_abs]`.
    /// Deterministic in `(families, edges, seed, max_abs)`.
    pub fn seeded(
        families: usize,
        edges: usize,
        seed: u64,
        max_abs: i64,
    ) -> Result<Self, VerifyError> {
        assert!(max_abs >= 1, "draw range must be nonempty");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..families)
            .map(|_| {
                (0..edges)
                    .map(|_| loop {
                        let v = rng.gen_range(-max_abs..=max_abs);
                        if v != 0 {
                            break rat(v);
                        }
                    })
                    .collect()
            })
            .collect();
        Self::numeric(values)
    }

    /// The golden fixture: the first 24 primes as `a_1(e_0), ..., a_3(e_7)`
    /// in family-major order over 8 edges, matching the 5-leaf example
    /// tree's edge order in [`crate::fixtures::example_5tree`].
    pub fn example_primes() -> Self {
        const PRIMES: [i64; 24] = [
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
            83, 89,
        ];
        let values = (0..3)
            .map(|j| (0..8).map(|e| rat(PRIMES[8 * j + e])).collect())
            .collect();
        Self::numeric(values).expect("fixture dimensions are fixed")
    }

    pub fn families(&self) -> usize {
        self.families
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn is_numeric(&self) -> bool {
        self.numeric.is_some()
    }

    /// The variable set shared by every polynomial this assignment feeds;
    /// empty in numeric mode.
    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// Index of the symbolic variable for `(family, edge)`.
    pub fn variable_index(&self, family: usize, edge: usize) -> usize {
        (family - 1) * self.edges + edge
    }

    /// The coefficient `a_family(edge)` as a polynomial over [`Self::vars`].
    pub fn coefficient(&self, family: usize, edge: usize) -> Result<CoeffPoly, VerifyError> {
        if family == 0 || family > self.families {
            return Err(VerifyError::FamilyNotCovered {
                family,
                families: self.families,
            });
        }
        if edge >= self.edges {
            return Err(VerifyError::WrongEdgeCount {
                need: edge + 1,
                got: self.edges,
            });
        }
        Ok(match &self.numeric {
            Some(values) => CoeffPoly::constant(&self.vars, values[family - 1][edge].clone()),
            None => CoeffPoly::variable(&self.vars, self.variable_index(family, edge)),
        })
    }

    /// Whether any drawn coefficient is zero (useful only for diagnostics;
    /// [`Self::seeded`] never draws zeros).
    pub fn has_zero(&self) -> bool {
        self.numeric
            .as_ref()
            .is_some_and(|values| values.iter().flatten().any(Rational::is_zero))
    }
}
