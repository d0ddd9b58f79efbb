//! Exact realization of tree metrics and ultrametrics by weighted trees.

use num_traits::Zero;

use crate::exact::{ratio, Rational};
use crate::trees::{EquidistantTree, TreeBuilder, WeightedTree};

use super::{DissimilarityMatrix, MetricError};

/// Growing tree scaffold used during sequential leaf insertion: plain
/// node/edge lists that allow edge splitting before the final validated
/// build.
struct Scaffold {
    labels: Vec<Option<usize>>,
    edges: Vec<(usize, usize, Rational)>,
}

impl Scaffold {
    fn node_of_leaf(&self, label: usize) -> usize {
        self.labels
            .iter()
            .position(|l| *l == Some(label))
            .expect("leaf was placed")
    }

    /// Edge indices along the path between two nodes, by DFS.
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.labels.len()];
        for (idx, (u, v, _)) in self.edges.iter().enumerate() {
            adjacency[*u].push((*v, idx));
            adjacency[*v].push((*u, idx));
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.labels.len()];
        let mut seen = vec![false; self.labels.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            for &(y, e) in &adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    stack.push(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, e) = parent[cur].expect("scaffold is connected");
            path.push(e);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Attaches leaf `x` by a pendant edge of length `pendant` to the point
    /// at distance `offset` from `start` along the path to `target`.
    /// Splitting at a leaf endpoint inserts a zero-length pendant for that
    /// leaf instead of giving it degree 2.
    fn attach(
        &mut self,
        start: usize,
        target: usize,
        offset: &Rational,
        x: usize,
        pendant: Rational,
    ) {
        let attach_node = self.node_at(start, target, offset);
        let leaf = self.labels.len();
        self.labels.push(Some(x));
        self.edges.push((attach_node, leaf, pendant));
    }

    /// Internal node at the given distance from `start` toward `target`,
    /// splitting an edge or displacing a leaf endpoint as needed.
    fn node_at(&mut self, start: usize, target: usize, offset: &Rational) -> usize {
        let mut cum = Rational::zero();
        let mut current = start;
        for edge_idx in self.path(start, target) {
            let (u, v, len) = self.edges[edge_idx].clone();
            let (near, far) = if u == current { (u, v) } else { (v, u) };
            let after = &cum + &len;
            if &after < offset {
                cum = after;
                current = far;
                continue;
            }
            let local = offset - &cum;
            if local.is_zero() {
                return self.point_at_node(near, edge_idx);
            }
            if local == len {
                if self.labels[far].is_none() {
                    return far;
                }
                return self.point_at_node(far, edge_idx);
            }
            // Strictly inside the edge: split it.
            let mid = self.fresh_internal();
            self.edges[edge_idx] = (near, mid, local.clone());
            self.edges.push((mid, far, &len - &local));
            return mid;
        }
        unreachable!("attachment offset lies on the path for a four-point metric");
    }

    /// Resolves "the point is exactly at `node`": internal nodes are used
    /// directly, a leaf node is displaced behind a zero-length pendant so
    /// it keeps degree 1.
    fn point_at_node(&mut self, node: usize, walk_edge: usize) -> usize {
        if self.labels[node].is_none() {
            return node;
        }
        let mid = self.fresh_internal();
        let (u, v, len) = self.edges[walk_edge].clone();
        let other = if u == node { v } else { u };
        self.edges[walk_edge] = (mid, other, len);
        self.edges.push((node, mid, Rational::zero()));
        mid
    }

    fn fresh_internal(&mut self) -> usize {
        self.labels.push(None);
        self.labels.len() - 1
    }

    fn into_tree(self) -> Result<WeightedTree, MetricError> {
        let mut builder = TreeBuilder::new();
        for label in &self.labels {
            match label {
                Some(l) => builder.add_leaf(*l),
                None => builder.add_internal(),
            };
        }
        for (u, v, len) in self.edges {
            builder.add_edge(u, v, len);
        }
        Ok(builder.build()?)
    }
}

/// Builds the unique weighted tree realizing a tree metric, by sequential
/// leaf insertion: leaf `x` joins at the divergence point
/// `c* = max_j (D(1,x) + D(1,j) - D(j,x)) / 2` along the path from leaf 1
/// to the maximizing leaf `j*`, with pendant length `D(1,x) - c*`. All
/// arithmetic is exact, and the result is re-verified entry-for-entry
/// against the input.
pub fn reconstruct_tree(d: &DissimilarityMatrix) -> Result<WeightedTree, MetricError> {
    if d.n() < 2 {
        return Err(MetricError::BadMatrix(
            "reconstruction needs at least 2 points".into(),
        ));
    }
    if let Some(violation) = d.four_point_violation() {
        return Err(MetricError::FourPoint(violation));
    }

    let mut scaffold = Scaffold {
        labels: vec![Some(1), Some(2)],
        edges: vec![(0, 1, d.get(1, 2).clone())],
    };
    let half = ratio(1, 2);
    for x in 3..=d.n() {
        // Divergence distances from leaf 1; the maximum locates the
        // attachment point.
        let (mut c_star, mut j_star): (Option<Rational>, usize) = (None, 0);
        for j in 2..x {
            let c = (d.get(1, x) + d.get(1, j) - d.get(j, x)) * &half;
            if c_star.as_ref().is_none_or(|best| &c > best) {
                c_star = Some(c);
                j_star = j;
            }
        }
        let c_star = c_star.expect("x >= 3 has a candidate");
        let pendant = d.get(1, x) - &c_star;
        let start = scaffold.node_of_leaf(1);
        let target = scaffold.node_of_leaf(j_star);
        scaffold.attach(start, target, &c_star, x, pendant);
    }

    let tree = scaffold.into_tree()?;
    for i in 1..=d.n() {
        for j in (i + 1)..=d.n() {
            let got = tree.leaf_distance(i, j)?;
            if &got != d.get(i, j) {
                return Err(MetricError::ReconstructionMismatch {
                    i,
                    j,
                    expected: d.get(i, j).clone(),
                    got,
                });
            }
        }
    }
    Ok(tree)
}

/// Builds the equidistant tree realizing an ultrametric: clusters merge
/// bottom-up at half their separation, and equal minimum separations merge
/// as one multiway node, so an all-equal matrix yields a star. The root
/// height is half the largest entry. Off-diagonal entries must be positive
/// for a realization with strictly height-monotone edges to exist.
pub fn equidistant_realization(d: &DissimilarityMatrix) -> Result<EquidistantTree, MetricError> {
    let n = d.n();
    if n < 2 {
        return Err(MetricError::BadMatrix(
            "realization needs at least 2 points".into(),
        ));
    }
    if let Some(violation) = d.ultrametric_violation(&d.all_labels()) {
        return Err(MetricError::Ultrametric(violation));
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            if d.get(i, j) <= &Rational::zero() {
                return Err(MetricError::BadMatrix(format!(
                    "entry ({i},{j}) = {} must be positive for an equidistant realization",
                    d.get(i, j)
                )));
            }
        }
    }

    let mut builder = TreeBuilder::new();
    // (node, height, representative leaf); in an ultrametric, any member
    // represents its cluster: cross-cluster distances are constant.
    let mut clusters: Vec<(usize, Rational, usize)> = (1..=n)
        .map(|label| (builder.add_leaf(label), Rational::zero(), label))
        .collect();

    let half = ratio(1, 2);
    while clusters.len() > 1 {
        let separation = clusters
            .iter()
            .enumerate()
            .flat_map(|(a, ca)| {
                clusters[a + 1..]
                    .iter()
                    .map(move |cb| d.get(ca.2, cb.2).clone())
            })
            .min()
            .expect("at least two clusters");
        let height = &separation * &half;

        // Connected components of the minimum-separation graph merge
        // simultaneously (multiway ties become one node).
        let k = clusters.len();
        let mut component: Vec<usize> = (0..k).collect();
        fn find(component: &mut Vec<usize>, x: usize) -> usize {
            if component[x] != x {
                let root = find(component, component[x]);
                component[x] = root;
            }
            component[x]
        }
        for a in 0..k {
            for b in (a + 1)..k {
                if d.get(clusters[a].2, clusters[b].2) == &separation {
                    let ra = find(&mut component, a);
                    let rb = find(&mut component, b);
                    component[ra] = rb;
                }
            }
        }

        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
        for a in 0..k {
            let root = find(&mut component, a);
            groups[root].push(a);
        }
        let mut next_clusters = Vec::new();
        for group in groups {
            match group.len() {
                0 => {}
                1 => next_clusters.push(clusters[group[0]].clone()),
                _ => {
                    let node = builder.add_internal();
                    for &a in &group {
                        let (child, child_height, _) = &clusters[a];
                        builder.add_edge(node, *child, &height - child_height);
                    }
                    next_clusters.push((node, height.clone(), clusters[group[0]].2));
                }
            }
        }
        clusters = next_clusters;
    }

    builder.set_root(clusters[0].0);
    Ok(EquidistantTree::from_weighted(builder.build()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fixtures::example_5tree;
    use crate::trees::random_tree;

    #[test]
    fn two_and_three_point_reconstruction() {
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(7)],
            vec![rat(7), rat(0)],
        ])
        .unwrap();
        let t = reconstruct_tree(&d).unwrap();
        assert_eq!(t.n_leaves(), 2);
        assert_eq!(t.leaf_distance(1, 2).unwrap(), rat(7));

        // Star formulas: branch of i = (D(i,j) + D(i,k) - D(j,k)) / 2.
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(3), rat(5)],
            vec![rat(3), rat(0), rat(6)],
            vec![rat(5), rat(6), rat(0)],
        ])
        .unwrap();
        let t = reconstruct_tree(&d).unwrap();
        let center = t.neighbors(t.leaf_node(1).unwrap())[0].0;
        assert_eq!(t.node_distance(t.leaf_node(1).unwrap(), center), rat(1));
        assert_eq!(t.node_distance(t.leaf_node(2).unwrap(), center), rat(2));
        assert_eq!(t.node_distance(t.leaf_node(3).unwrap(), center), rat(4));
    }

    #[test]
    fn round_trip_on_the_example_tree() {
        let original = example_5tree();
        let d = DissimilarityMatrix::from_tree(original.tree()).unwrap();
        let rebuilt = reconstruct_tree(&d).unwrap();
        assert_eq!(rebuilt.digest(), original.tree().digest());
        assert_eq!(rebuilt.total_length(), rat(37));
    }

    #[test]
    fn round_trip_on_random_trees() {
        let universe: Vec<Rational> = (1..=9).map(rat).collect();
        for seed in 0..25 {
            let n = 4 + (seed as usize % 9); // 4..=12
            let t = random_tree(n, seed, &universe).unwrap();
            let d = DissimilarityMatrix::from_tree(&t).unwrap();
            let rebuilt = reconstruct_tree(&d).unwrap();
            for i in 1..=n {
                for j in (i + 1)..=n {
                    assert_eq!(
                        rebuilt.leaf_distance(i, j).unwrap(),
                        t.leaf_distance(i, j).unwrap(),
                        "seed {seed}, pair ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn four_point_violation_is_reported_with_witness() {
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(2), rat(4), rat(3)],
            vec![rat(2), rat(0), rat(3), rat(3)],
            vec![rat(4), rat(3), rat(0), rat(2)],
            vec![rat(3), rat(3), rat(2), rat(0)],
        ])
        .unwrap();
        match reconstruct_tree(&d) {
            Err(MetricError::FourPoint(v)) => assert_eq!(v.quadruple, [1, 2, 3, 4]),
            other => panic!("expected a four-point error, got {other:?}"),
        }
    }

    #[test]
    fn equidistant_cherry_realization() {
        // D(1,2) = 2 under a root at height 3.
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(2), rat(6)],
            vec![rat(2), rat(0), rat(6)],
            vec![rat(6), rat(6), rat(0)],
        ])
        .unwrap();
        let t = equidistant_realization(&d).unwrap();
        assert_eq!(t.root_height(), &rat(3));
        assert_eq!(t.node_height(t.lca(1, 2).unwrap()), &rat(1));
        for i in 1..=3 {
            for j in (i + 1)..=3 {
                assert_eq!(&t.tree().leaf_distance(i, j).unwrap(), d.get(i, j));
            }
        }
    }

    #[test]
    fn all_equal_matrix_realizes_as_a_star() {
        let rows = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| if i == j { rat(0) } else { rat(6) })
                    .collect()
            })
            .collect();
        let d = DissimilarityMatrix::from_rows(rows).unwrap();
        let t = equidistant_realization(&d).unwrap();
        assert_eq!(t.root_height(), &rat(3));
        assert_eq!(t.tree().degree(t.root()), 4, "multiway tie merges once");
        assert_eq!(t.tree().node_count(), 5);
    }

    #[test]
    fn equidistant_realization_of_the_example_distances() {
        let original = example_5tree();
        let d = DissimilarityMatrix::from_tree(original.tree()).unwrap();
        let t = equidistant_realization(&d).unwrap();
        assert_eq!(t.tree().digest(), original.tree().digest());
        assert_eq!(t.root_height(), &rat(10));
        assert_eq!(t.node_height(t.lca(1, 2).unwrap()), &rat(4));
        assert_eq!(t.node_height(t.lca(1, 3).unwrap()), &rat(7));
        assert_eq!(t.node_height(t.lca(4, 5).unwrap()), &rat(6));
    }

    #[test]
    fn non_ultrametric_is_rejected_with_witness() {
        let d = DissimilarityMatrix::from_rows(vec![
            vec![rat(0), rat(1), rat(2)],
            vec![rat(1), rat(0), rat(3)],
            vec![rat(2), rat(3), rat(0)],
        ])
        .unwrap();
        match equidistant_realization(&d) {
            Err(MetricError::Ultrametric(v)) => assert_eq!(v.triple, [1, 2, 3]),
            other => panic!("expected an ultrametric error, got {other:?}"),
        }
    }

    #[test]
    fn shift_then_realize_on_random_trees() {
        let universe: Vec<Rational> = (1..=9).map(rat).collect();
        for seed in 100..115 {
            let n = 5 + (seed as usize % 4);
            let t = random_tree(n, seed, &universe).unwrap();
            let d = DissimilarityMatrix::from_tree(&t).unwrap();
            let (shifted, e) = d.ultrametric_shift(None).unwrap();

            // Anchor column is constant 2E.
            for i in 1..n {
                assert_eq!(shifted.get(i, n), &(&e + &e));
            }
            // Shifted matrix stays a tree metric and its restriction to
            // 1..n-1 is an ultrametric realized exactly.
            assert!(shifted.is_tree_metric());
            let interior: Vec<usize> = (1..n).collect();
            assert!(shifted.is_ultrametric(&interior));

            let rows = (1..n)
                .map(|i| (1..n).map(|j| shifted.get(i, j).clone()).collect())
                .collect();
            let restricted = DissimilarityMatrix::from_rows(rows).unwrap();
            let realized = equidistant_realization(&restricted).unwrap();
            for i in 1..n {
                for j in (i + 1)..n {
                    assert_eq!(
                        &realized.tree().leaf_distance(i, j).unwrap(),
                        restricted.get(i, j)
                    );
                }
            }
            // 2F = max D'.
            let two_f = realized.root_height() + realized.root_height();
            let max = (1..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .map(|(i, j)| restricted.get(i, j).clone())
                .max()
                .unwrap();
            assert_eq!(two_f, max);
        }
    }
}
