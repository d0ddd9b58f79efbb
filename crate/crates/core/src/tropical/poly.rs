//! Max-plus polynomials over named coordinates and their corner loci.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::TropicalError;
use crate::exact::rational::rational_str;
use crate::exact::Rational;

/// Converts a sorted index subset into a coordinate name, e.g. `{1, 3}`
/// becomes `"x_1_3"`. All tropical coordinates in this crate index subsets
/// of leaf labels, so the naming is centralized here.
pub fn coordinate_name(subset: &[usize]) -> String {
    let mut name = String::from("x");
    for i in subset {
        name.push('_');
        name.push_str(&i.to_string());
    }
    name
}

/// One max-plus term `constant + sum_v exponents[v] * v`.
///
/// Classically this is a monomial `c * prod v^e`; tropically multiplication
/// becomes addition, so the term evaluates to an affine function of the
/// point. A tropicalized Puiseux coefficient `f_i` contributes the constant
/// `-val(f_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalTerm {
    pub constant: Rational,
    pub exponents: BTreeMap<String, u32>,
}

impl TropicalTerm {
    pub fn new(constant: Rational, exponents: &[(&str, u32)]) -> Self {
        Self {
            constant,
            exponents: exponents
                .iter()
                .map(|(name, e)| (name.to_string(), *e))
                .collect(),
        }
    }

    fn eval(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, TropicalError> {
        let mut total = self.constant.clone();
        for (name, &exponent) in &self.exponents {
            let value = point
                .get(name)
                .ok_or_else(|| TropicalError::MissingCoordinate(name.clone()))?;
            total += value * Rational::from_integer(exponent.into());
        }
        Ok(total)
    }
}

impl fmt::Display for TropicalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (name, exponent) in &self.exponents {
            write!(f, " + {exponent}*{name}")?;
        }
        Ok(())
    }
}

/// A tropical (max-plus) polynomial: the pointwise maximum of its terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    terms: Vec<TropicalTerm>,
}

impl TropicalPolynomial {
    /// At least one term is required; the empty maximum has no value.
    pub fn new(terms: Vec<TropicalTerm>) -> Result<Self, TropicalError> {
        if terms.is_empty() {
            return Err(TropicalError::EmptyPolynomial);
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[TropicalTerm] {
        &self.terms
    }

    /// Evaluates every term at `point`, in term order. [`trop_eval`] reports
    /// only the maximum and its achievers; this exposes the full profile,
    /// e.g. for violation witnesses.
    pub fn term_values(
        &self,
        point: &BTreeMap<String, Rational>,
    ) -> Result<Vec<Rational>, TropicalError> {
        self.terms.iter().map(|term| term.eval(point)).collect()
    }
}

impl fmt::Display for TropicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max{{")?;
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{term}")?;
        }
        write!(f, "}}")
    }
}

/// The outcome of evaluating a tropical polynomial at a point: the maximum
/// and the indices of every term attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerResult {
    #[serde(with = "rational_str")]
    pub value: Rational,
    /// Indices into [`TropicalPolynomial::terms`] attaining the maximum.
    pub achievers: Vec<usize>,
}

impl CornerResult {
    /// A point lies on the tropical hypersurface (the corner locus) exactly
    /// when the maximum is attained by at least two terms.
    pub fn is_corner(&self) -> bool {
        self.achievers.len() >= 2
    }
}

/// Evaluates `f` at `point`, reporting the maximum and all achieving terms.
///
/// Every coordinate mentioned by any term of `f` must be present in `point`;
/// a missing coordinate is an error rather than a default, since silently
/// substituting zero would fabricate membership answers.
pub fn trop_eval(
    f: &TropicalPolynomial,
    point: &BTreeMap<String, Rational>,
) -> Result<CornerResult, TropicalError> {
    let mut best: Option<CornerResult> = None;
    for (index, term) in f.terms.iter().enumerate() {
        let value = term.eval(point)?;
        match &mut best {
            None => {
                best = Some(CornerResult {
                    value,
                    achievers: vec![index],
                });
            }
            Some(result) => {
                if value > result.value {
                    result.value = value;
                    result.achievers.clear();
                    result.achievers.push(index);
                } else if value == result.value {
                    result.achievers.push(index);
                }
            }
        }
    }
    // `new` rejects empty polynomials, so at least one term was seen.
    Ok(best.expect("polynomial has at least one term"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn point(coords: &[(&str, i64)]) -> BTreeMap<String, Rational> {
        coords
            .iter()
            .map(|(name, v)| (name.to_string(), rat(*v)))
            .collect()
    }

    #[test]
    fn all_terms_tie_at_origin() {
        // max{x + y, 2x, 0} at the origin: every term evaluates to 0.
        let f = TropicalPolynomial::new(vec![
            TropicalTerm::new(rat(0), &[("x", 1), ("y", 1)]),
            TropicalTerm::new(rat(0), &[("x", 2)]),
            TropicalTerm::new(rat(0), &[]),
        ])
        .unwrap();
        let result = trop_eval(&f, &point(&[("x", 0), ("y", 0)])).unwrap();
        assert_eq!(result.value, rat(0));
        assert_eq!(result.achievers, vec![0, 1, 2]);
        assert!(result.is_corner());
    }

    #[test]
    fn unique_maximum_is_not_a_corner() {
        let f = TropicalPolynomial::new(vec![
            TropicalTerm::new(rat(0), &[("x", 1), ("y", 1)]),
            TropicalTerm::new(rat(0), &[("x", 2)]),
            TropicalTerm::new(rat(0), &[]),
        ])
        .unwrap();
        // At (3, 1): x + y = 4, 2x = 6, 0 = 0.
        let result = trop_eval(&f, &point(&[("x", 3), ("y", 1)])).unwrap();
        assert_eq!(result.value, rat(6));
        assert_eq!(result.achievers, vec![1]);
        assert!(!result.is_corner());
    }

    #[test]
    fn constants_shift_the_balance() {
        // max{x + 1, y}: ties exactly when y - x = 1.
        let f = TropicalPolynomial::new(vec![
            TropicalTerm::new(rat(1), &[("x", 1)]),
            TropicalTerm::new(rat(0), &[("y", 1)]),
        ])
        .unwrap();
        assert!(trop_eval(&f, &point(&[("x", 2), ("y", 3)]))
            .unwrap()
            .is_corner());
        assert!(!trop_eval(&f, &point(&[("x", 2), ("y", 4)]))
            .unwrap()
            .is_corner());
    }

    #[test]
    fn single_term_is_never_a_corner() {
        let f = TropicalPolynomial::new(vec![TropicalTerm::new(rat(5), &[("x", 3)])]).unwrap();
        let result = trop_eval(&f, &point(&[("x", 7)])).unwrap();
        assert_eq!(result.value, rat(26));
        assert!(!result.is_corner());
    }

    #[test]
    fn missing_coordinate_is_an_error() {
        let f = TropicalPolynomial::new(vec![TropicalTerm::new(rat(0), &[("x", 1), ("y", 1)])])
            .unwrap();
        let err = trop_eval(&f, &point(&[("x", 0)])).unwrap_err();
        assert_eq!(err, TropicalError::MissingCoordinate("y".into()));
    }

    #[test]
    fn empty_polynomial_is_rejected() {
        assert_eq!(
            TropicalPolynomial::new(vec![]).unwrap_err(),
            TropicalError::EmptyPolynomial
        );
    }

    #[test]
    fn coordinate_names_are_stable() {
        assert_eq!(coordinate_name(&[1, 3]), "x_1_3");
        assert_eq!(coordinate_name(&[2, 5, 9]), "x_2_5_9");
    }
}
