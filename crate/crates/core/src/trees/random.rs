//! Seeded random tree generation for property tests and the CLI.
//!
//! Everything is deterministic in the seed (ChaCha8, platform-independent),
//! so failures are reproducible from the reported seed alone.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exact::{rat, Rational};

use super::equidistant::EquidistantTree;
use super::weighted::{TreeBuilder, WeightedTree};
use super::TreeError;

/// Random unrooted binary tree with `n >= 3` leaves. The topology grows by
/// repeatedly subdividing a uniformly chosen edge; every edge length is then
/// drawn uniformly from `lengths`, which must be nonempty and strictly
/// positive.
pub fn random_tree(
    n: usize,
    seed: u64,
    lengths: &[Rational],
) -> Result<WeightedTree, TreeError> {
    if n < 3 {
        return Err(TreeError::TooFewLeaves { need: 3, got: n });
    }
    if lengths.is_empty() || lengths.iter().any(|l| l <= &Rational::zero()) {
        return Err(TreeError::BadLengthUniverse);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Structure first: center with three leaves, then subdivide.
    let mut labels: Vec<Option<usize>> = vec![None, Some(1), Some(2), Some(3)];
    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3)];
    for next_label in 4..=n {
        let split = rng.gen_range(0..edges.len());
        let (u, v) = edges[split];
        let mid = labels.len();
        labels.push(None);
        let leaf = labels.len();
        labels.push(Some(next_label));
        edges[split] = (u, mid);
        edges.push((mid, v));
        edges.push((mid, leaf));
    }

    let mut builder = TreeBuilder::new();
    for label in &labels {
        match label {
            Some(l) => builder.add_leaf(*l),
            None => builder.add_internal(),
        };
    }
    for (u, v) in edges {
        let length = lengths[rng.gen_range(0..lengths.len())].clone();
        builder.add_edge(u, v, length);
    }
    builder.build()
}

/// Random binary equidistant tree with `m >= 2` leaves: repeatedly merges
/// two uniformly chosen active subtrees at a strictly increasing height, so
/// all heights are parent-monotone by construction.
pub fn random_equidistant(m: usize, seed: u64) -> Result<EquidistantTree, TreeError> {
    if m < 2 {
        return Err(TreeError::TooFewLeaves { need: 2, got: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = TreeBuilder::new();
    let mut active: Vec<(usize, Rational)> = (1..=m)
        .map(|label| (builder.add_leaf(label), Rational::zero()))
        .collect();
    let mut height = Rational::zero();
    while active.len() > 1 {
        let (a, ha) = active.swap_remove(rng.gen_range(0..active.len()));
        let (b, hb) = active.swap_remove(rng.gen_range(0..active.len()));
        height += rat(rng.gen_range(1..=4));
        let node = builder.add_internal();
        builder.add_edge(node, a, &height - &ha);
        builder.add_edge(node, b, &height - &hb);
        active.push((node, height.clone()));
    }
    builder.set_root(active[0].0);
    EquidistantTree::from_weighted(builder.build()?)
}
