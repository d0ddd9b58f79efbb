//! Rooted trees in which every leaf is at the same distance from the root.

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::exact::Rational;

use super::weighted::{NodeId, TreeBuilder, WeightedTree};
use super::TreeError;

/// A rooted [`WeightedTree`] whose leaves all lie at the same distance `F`
/// from the root, together with the height of every node (distance down to
/// any descendant leaf).
///
/// Heights strictly increase from child to parent, so every edge `e` has a
/// well-defined positive length `height(top) - height(bottom)` and a height
/// `h(e) = height(top)`.
#[derive(Clone, Debug)]
pub struct EquidistantTree {
    tree: WeightedTree,
    height: Vec<Rational>,
    parent: Vec<Option<(NodeId, usize)>>,
}

impl EquidistantTree {
    /// Validates that a rooted tree is equidistant with strictly
    /// height-monotone edges and computes all node heights.
    pub fn from_weighted(tree: WeightedTree) -> Result<Self, TreeError> {
        let root = tree.root().ok_or(TreeError::NotRooted)?;

        // Depths via DFS from the root.
        let mut depth: Vec<Option<Rational>> = vec![None; tree.node_count()];
        let mut parent: Vec<Option<(NodeId, usize)>> = vec![None; tree.node_count()];
        depth[root] = Some(Rational::zero());
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            let dx = depth[x].clone().expect("set before push");
            for &(y, e) in tree.neighbors(x) {
                if depth[y].is_none() {
                    depth[y] = Some(&dx + &tree.edges()[e].length);
                    parent[y] = Some((x, e));
                    stack.push(y);
                }
            }
        }

        // All leaves at equal depth F.
        let mut f: Option<(usize, Rational)> = None;
        for label in 1..=tree.n_leaves() {
            let node = tree.leaf_node(label)?;
            let d = depth[node].clone().expect("connected");
            match &f {
                None => f = Some((label, d)),
                Some((first, fd)) => {
                    if &d != fd {
                        return Err(TreeError::NotEquidistant {
                            leaf_a: *first,
                            leaf_b: label,
                        });
                    }
                }
            }
        }
        let (_, f) = f.expect("trees have at least 2 leaves");

        // height = F - depth; parents must sit strictly above children.
        let height: Vec<Rational> = depth
            .into_iter()
            .map(|d| &f - &d.expect("connected"))
            .collect();
        for (node, p) in parent.iter().enumerate() {
            if let Some((p, _)) = p {
                if height[*p] <= height[node] {
                    return Err(TreeError::NonMonotoneHeights);
                }
            }
        }

        Ok(EquidistantTree {
            tree,
            height,
            parent,
        })
    }

    pub fn tree(&self) -> &WeightedTree {
        &self.tree
    }

    pub fn n_leaves(&self) -> usize {
        self.tree.n_leaves()
    }

    pub fn root(&self) -> NodeId {
        self.tree.root().expect("constructed with a root")
    }

    /// The common root-to-leaf distance `F`.
    pub fn root_height(&self) -> &Rational {
        &self.height[self.root()]
    }

    pub fn node_height(&self, node: NodeId) -> &Rational {
        &self.height[node]
    }

    /// Height of an edge: the height of its upper endpoint.
    pub fn edge_height(&self, edge: usize) -> &Rational {
        let e = &self.tree.edges()[edge];
        std::cmp::max(&self.height[e.u], &self.height[e.v])
    }

    /// `(top, bottom)` endpoints of an edge in root-to-leaf orientation.
    pub fn edge_top_bottom(&self, edge: usize) -> (NodeId, NodeId) {
        let e = &self.tree.edges()[edge];
        if self.height[e.u] > self.height[e.v] {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent[node].map(|(p, _)| p)
    }

    pub fn children(&self, node: NodeId) -> Vec<NodeId> {
        self.tree
            .neighbors(node)
            .iter()
            .filter(|(y, _)| self.parent[*y].map(|(p, _)| p) == Some(node))
            .map(|&(y, _)| y)
            .collect()
    }

    /// Edge indices from the root down to the leaf with the given label.
    pub fn root_path_edges(&self, label: usize) -> Result<Vec<usize>, TreeError> {
        let mut node = self.tree.leaf_node(label)?;
        let mut path = Vec::new();
        while let Some((p, e)) = self.parent[node] {
            path.push(e);
            node = p;
        }
        path.reverse();
        Ok(path)
    }

    /// Lowest common ancestor of two leaves.
    pub fn lca(&self, i: usize, j: usize) -> Result<NodeId, TreeError> {
        let mut a = self.tree.leaf_node(i)?;
        let b = self.tree.leaf_node(j)?;
        let mut ancestors = vec![a];
        while let Some((p, _)) = self.parent[a] {
            ancestors.push(p);
            a = p;
        }
        let mut c = b;
        loop {
            if ancestors.contains(&c) {
                return Ok(c);
            }
            c = self.parent[c].expect("root is a common ancestor").0;
        }
    }

    /// Joins a new leaf labeled `n_leaves + 1` to the root by an edge of
    /// length `pendant`, which must exceed the root height. The result is
    /// returned as an unrooted tree: its leaf distances satisfy
    /// `D(i, n) = F + pendant` for every old leaf `i`.
    pub fn attach_anchor(&self, pendant: &Rational) -> Result<WeightedTree, TreeError> {
        if pendant <= self.root_height() {
            return Err(TreeError::AnchorTooShort {
                given: pendant.clone(),
                root_height: self.root_height().clone(),
            });
        }
        let mut b = TreeBuilder::new();
        for node in 0..self.tree.node_count() {
            match self.tree.leaf_label(node) {
                Some(l) => b.add_leaf(l),
                None => b.add_internal(),
            };
        }
        for e in self.tree.edges() {
            b.add_edge(e.u, e.v, e.length.clone());
        }
        let anchor = b.add_leaf(self.tree.n_leaves() + 1);
        b.add_edge(self.root(), anchor, pendant.clone());
        b.build()
    }
}

impl Serialize for EquidistantTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let heights: Vec<String> = self.height.iter().map(|h| h.to_string()).collect();
        let mut st = serializer.serialize_struct("EquidistantTree", 2)?;
        st.serialize_field("tree", &self.tree)?;
        st.serialize_field("heights", &heights)?;
        st.end()
    }
}
