//! Finitely supported polynomials in one distinguished variable `t` with
//! rational exponents and [`CoeffPoly`] coefficients.
//!
//! Exponents may be negative or non-integer: column rescaling introduces
//! negative powers and the `t -> t^(-1/2)` substitution introduces halves.
//! The zero polynomial has empty support; `degree`/`valuation` return `None`
//! for it (the -inf / +inf sentinels).

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::coeff::CoeffPoly;
use super::rational::Rational;
use super::varset::VarSet;
use super::ExactError;

#[derive(Clone, PartialEq, Eq)]
pub struct PuiseuxPoly {
    vars: VarSet,
    terms: BTreeMap<Rational, CoeffPoly>,
}

impl PuiseuxPoly {
    pub fn zero(vars: &VarSet) -> Self {
        PuiseuxPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Rational::from_integer(1.into()))
    }

    pub fn constant(vars: &VarSet, value: Rational) -> Self {
        Self::monomial(Rational::from_integer(0.into()), CoeffPoly::constant(vars, value))
    }

    /// Single term `coeff * t^exponent`. A zero coefficient yields zero.
    pub fn monomial(exponent: Rational, coeff: CoeffPoly) -> Self {
        let mut p = PuiseuxPoly {
            vars: coeff.vars().clone(),
            terms: BTreeMap::new(),
        };
        if !coeff.is_zero() {
            p.terms.insert(exponent, coeff);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &CoeffPoly)> {
        self.terms.iter()
    }

    /// Max exponent with nonzero coefficient; `None` is the -infinity
    /// sentinel of the zero polynomial.
    pub fn degree(&self) -> Option<Rational> {
        self.terms.keys().next_back().cloned()
    }

    /// Min exponent with nonzero coefficient; `None` is the +infinity
    /// sentinel of the zero polynomial.
    pub fn valuation(&self) -> Option<Rational> {
        self.terms.keys().next().cloned()
    }

    /// Coefficient of the highest power of `t`.
    pub fn leading_coeff(&self) -> Option<&CoeffPoly> {
        self.terms.values().next_back()
    }

    /// Coefficient of the lowest power of `t`.
    pub fn trailing_coeff(&self) -> Option<&CoeffPoly> {
        self.terms.values().next()
    }

    /// Coefficient of `t^exponent` (zero if absent).
    pub fn coeff_at(&self, exponent: &Rational) -> CoeffPoly {
        self.terms
            .get(exponent)
            .cloned()
            .unwrap_or_else(|| CoeffPoly::zero(&self.vars))
    }

    fn check_vars(&self, other: &Self) -> Result<(), ExactError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(ExactError::MismatchedVariables)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        out.accumulate(other, false);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        out.accumulate(other, true);
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        PuiseuxPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                let c = c1.mul(c2);
                out.insert_term(e, c);
            }
        }
        Ok(out)
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same variable set")
    }

    /// Replaces `t` by `t^s`: every exponent `q` becomes `s*q`, coefficients
    /// unchanged. For negative `s` degree and valuation swap with sign flip.
    pub fn substitute_scale(&self, s: &Rational) -> Result<Self, ExactError> {
        use num_traits::Zero;
        if s.is_zero() {
            return Err(ExactError::ZeroScale);
        }
        Ok(PuiseuxPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * s, c.clone()))
                .collect(),
        })
    }

    /// Multiplies by `t^shift`.
    pub fn shift_exponents(&self, shift: &Rational) -> Self {
        PuiseuxPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + shift, c.clone()))
                .collect(),
        }
    }

    pub(crate) fn accumulate(&mut self, other: &Self, negate: bool) {
        for (e, c) in &other.terms {
            match self.terms.get_mut(e) {
                Some(v) => {
                    if negate {
                        v.sub_assign(c);
                    } else {
                        v.add_assign(c);
                    }
                    if v.is_zero() {
                        self.terms.remove(e);
                    }
                }
                None => {
                    let c = if negate { c.neg() } else { c.clone() };
                    self.terms.insert(e.clone(), c);
                }
            }
        }
    }

    fn insert_term(&mut self, exponent: Rational, coeff: CoeffPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(v) => {
                v.add_assign(&coeff);
                if v.is_zero() {
                    self.terms.remove(&exponent);
                }
            }
            None => {
                self.terms.insert(exponent, coeff);
            }
        }
    }
}

impl fmt::Display for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let needs_parens = c.term_count() > 1;
            let coeff = c.to_string();
            use num_traits::Zero;
            if e.is_zero() {
                write!(f, "{coeff}")?;
            } else {
                let power = if e == &Rational::from_integer(1.into()) {
                    "t".to_string()
                } else {
                    format!("t^({e})")
                };
                if coeff == "1" {
                    write!(f, "{power}")?;
                } else if needs_parens {
                    write!(f, "({coeff})*{power}")?;
                } else {
                    write!(f, "{coeff}*{power}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// List of `{exponent, coefficient}` records in strictly decreasing
/// exponent order.
impl Serialize for PuiseuxPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exponent: String,
            coefficient: &'a CoeffPoly,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in self.terms.iter().rev() {
            seq.serialize_element(&Term {
                exponent: e.to_string(),
                coefficient: c,
            })?;
        }
        seq.end()
    }
}
