//! Multivariate polynomial coefficients with exact rational scalars.
//!
//! These are the coefficients sitting in front of powers of `t`: symbolic
//! edge weights in symbolic runs, plain rationals (empty variable set) in
//! numeric runs. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::rational::Rational;
use super::varset::VarSet;

/// Sparse multivariate polynomial over a fixed [`VarSet`].
///
/// Arithmetic between polynomials over different variable sets is a caller
/// bug; the binary operators panic on it. The checked entry points live on
/// `PuiseuxPoly`, which validates once per operation.
#[derive(Clone, PartialEq, Eq)]
pub struct CoeffPoly {
    vars: VarSet,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl CoeffPoly {
    pub fn zero(vars: &VarSet) -> Self {
        CoeffPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, value: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !value.is_zero() {
            p.terms.insert(vec![0; vars.len()], value);
        }
        p
    }

    /// The degree-one monomial `x_i`.
    pub fn variable(vars: &VarSet, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut exps = vec![0u32; vars.len()];
        exps[i] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(exps, Rational::from_integer(1.into()));
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

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    /// Some(r) iff the polynomial is the constant `r` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree of each monomial if they all agree, i.e. the polynomial
    /// is homogeneous. Zero is vacuously homogeneous of any degree (None).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self
            .terms
            .keys()
            .map(|m| m.iter().copied().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn assert_same_vars(&self, other: &Self) {
        assert!(
            self.vars == other.vars,
            "coefficient polynomials over different variable sets"
        );
    }

    pub(crate) fn add_assign(&mut self, other: &Self) {
        self.assert_same_vars(other);
        for (m, c) in &other.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), c.clone());
                }
            }
        }
    }

    pub(crate) fn sub_assign(&mut self, other: &Self) {
        self.assert_same_vars(other);
        for (m, c) in &other.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    *v -= c;
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), -c.clone());
                }
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                match out.terms.get_mut(&m) {
                    Some(v) => {
                        *v += c;
                        if v.is_zero() {
                            out.terms.remove(&m);
                        }
                    }
                    None => {
                        out.terms.insert(m, c);
                    }
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        CoeffPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    fn format_monomial(&self, exps: &[u32]) -> String {
        let factors: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.vars.name(i).to_string()
                } else {
                    format!("{}^{}", self.vars.name(i), e)
                }
            })
            .collect();
        factors.join("*")
    }
}

impl std::ops::Add for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl std::ops::Sub for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl std::ops::Mul for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        self.mul(rhs)
    }
}

impl std::ops::Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly::neg(self)
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let shown = if k == 0 {
                write!(f, "")?;
                c.clone()
            } else if c < &Rational::zero() {
                write!(f, " - ")?;
                -c.clone()
            } else {
                write!(f, " + ")?;
                c.clone()
            };
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                write!(f, "{shown}")?;
            } else if shown == Rational::from_integer(1.into()) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{shown}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serializes as `"p/q"` when numeric, otherwise as a sorted monomial list
/// (the golden-file format for symbolic leading coefficients).
impl Serialize for CoeffPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if let Some(c) = self.as_constant() {
            return serializer.serialize_str(&c.to_string());
        }
        #[derive(Serialize)]
        struct Term<'a> {
            exponents: &'a [u32],
            coeff: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(m, c)| Term {
                exponents: m,
                coeff: c.to_string(),
            })
            .collect();
        let mut st = serializer.serialize_struct("CoeffPoly", 2)?;
        st.serialize_field("vars", self.vars.names())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
