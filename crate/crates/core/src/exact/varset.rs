use std::fmt;
use std::sync::Arc;

/// A named, ordered set of coefficient variables shared by every polynomial
/// of one computation. The empty set is the numeric (plain rational) case.
#[derive(Clone, Eq)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl VarSet {
    pub fn empty() -> Self {
        VarSet {
            names: Arc::new(Vec::new()),
        }
    }

    /// Builds a variable set from distinct names. Panics on duplicates,
    /// which would make monomial exponent vectors ambiguous.
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            assert!(seen.insert(n.clone()), "duplicate variable name {n:?}");
        }
        VarSet {
            names: Arc::new(names),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet{:?}", self.names)
    }
}
