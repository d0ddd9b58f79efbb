//! Vectors indexed by the m-subsets of `[n]`.

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{parse_rational, Rational};
use crate::trees::WeightedTree;

use super::{DissimilarityMatrix, MetricError};

/// One exact value per m-subset `{i_1 < ... < i_m}` of `1..=n`, stored in
/// lexicographic subset order. For a tree this is the m-dissimilarity
/// vector: the Steiner subtree weight of each subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MVector {
    n: usize,
    m: usize,
    values: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct MVectorEntryWire {
    subset: Vec<usize>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct MVectorWire {
    n: usize,
    m: usize,
    values: Vec<MVectorEntryWire>,
}

/// Binomial coefficient, exact in u64 for the sizes used here.
fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result = 1u64;
    for i in 0..k {
        result = result * (n - i) as u64 / (i + 1) as u64;
    }
    result
}

impl MVector {
    /// The m-dissimilarity vector of a tree: one Steiner subtree weight per
    /// m-subset of leaves. Needs `2 <= m <= n`.
    pub fn of_tree(tree: &WeightedTree, m: usize) -> Result<Self, MetricError> {
        let n = tree.n_leaves();
        if m < 2 || m > n {
            return Err(MetricError::MOutOfRange { m, n });
        }
        let values = (1..=n)
            .combinations(m)
            .map(|subset| tree.steiner_weight(&subset))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MVector { n, m, values })
    }

    /// Builds from explicit `(subset, value)` pairs; every m-subset must
    /// appear exactly once.
    pub fn from_values(
        n: usize,
        m: usize,
        pairs: Vec<(Vec<usize>, Rational)>,
    ) -> Result<Self, MetricError> {
        if m < 2 || m > n {
            return Err(MetricError::MOutOfRange { m, n });
        }
        let count = binomial(n, m) as usize;
        if pairs.len() != count {
            return Err(MetricError::BadSubset(format!(
                "expected {count} subsets, got {}",
                pairs.len()
            )));
        }
        let mut values: Vec<Option<Rational>> = vec![None; count];
        for (subset, value) in pairs {
            let idx = Self::rank(n, m, &subset)?;
            if values[idx].is_some() {
                return Err(MetricError::BadSubset(format!(
                    "subset {subset:?} appears twice"
                )));
            }
            values[idx] = Some(value);
        }
        Ok(MVector {
            n,
            m,
            values: values.into_iter().map(|v| v.expect("all filled")).collect(),
        })
    }

    /// The pairwise matrix in vector form (m = 2).
    pub fn from_matrix(d: &DissimilarityMatrix) -> Result<Self, MetricError> {
        let n = d.n();
        let pairs = (1..=n)
            .combinations(2)
            .map(|s| {
                let v = d.get(s[0], s[1]).clone();
                (s, v)
            })
            .collect();
        Self::from_values(n, 2, pairs)
    }

    /// Inverse of [`MVector::from_matrix`]; only defined for m = 2.
    pub fn to_matrix(&self) -> Result<DissimilarityMatrix, MetricError> {
        if self.m != 2 {
            return Err(MetricError::MOutOfRange {
                m: self.m,
                n: self.n,
            });
        }
        let mut rows = vec![vec![Rational::zero(); self.n]; self.n];
        for (subset, value) in self.iter() {
            rows[subset[0] - 1][subset[1] - 1] = value.clone();
            rows[subset[1] - 1][subset[0] - 1] = value.clone();
        }
        DissimilarityMatrix::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Lexicographic rank of a sorted, distinct, in-range m-subset.
    fn rank(n: usize, m: usize, subset: &[usize]) -> Result<usize, MetricError> {
        if subset.len() != m {
            return Err(MetricError::BadSubset(format!(
                "subset {subset:?} has size {}, expected {m}",
                subset.len()
            )));
        }
        let sorted = subset.windows(2).all(|w| w[0] < w[1]);
        if !sorted || subset[0] < 1 || subset[m - 1] > n {
            return Err(MetricError::BadSubset(format!(
                "subset {subset:?} must be strictly increasing within 1..={n}"
            )));
        }
        let mut rank = 0u64;
        let mut prev = 0usize;
        for (pos, &a) in subset.iter().enumerate() {
            for skipped in (prev + 1)..a {
                rank += binomial(n - skipped, m - pos - 1);
            }
            prev = a;
        }
        Ok(rank as usize)
    }

    /// Value on a sorted m-subset of `1..=n`.
    pub fn value(&self, subset: &[usize]) -> Result<&Rational, MetricError> {
        let idx = Self::rank(self.n, self.m, subset)?;
        Ok(&self.values[idx])
    }

    /// `(subset, value)` pairs in lexicographic subset order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> {
        (1..=self.n)
            .combinations(self.m)
            .zip(self.values.iter())
    }

    /// Copy with one subset's value replaced.
    pub fn with_value(&self, subset: &[usize], value: Rational) -> Result<Self, MetricError> {
        let idx = Self::rank(self.n, self.m, subset)?;
        let mut out = self.clone();
        out.values[idx] = value;
        Ok(out)
    }
}

impl Serialize for MVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let values = self
            .iter()
            .map(|(subset, value)| MVectorEntryWire {
                subset,
                value: value.to_string(),
            })
            .collect();
        MVectorWire {
            n: self.n,
            m: self.m,
            values,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = MVectorWire::deserialize(deserializer)?;
        let pairs = wire
            .values
            .into_iter()
            .map(|e| {
                let value = parse_rational(&e.value).map_err(serde::de::Error::custom)?;
                Ok((e.subset, value))
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        Self::from_values(wire.n, wire.m, pairs).map_err(serde::de::Error::custom)
    }
}
