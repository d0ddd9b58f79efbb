//! The core weighted tree type and its builder.

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::exact::rational::rational_str;
use crate::exact::Rational;

use super::TreeError;

/// Index into a tree's node table.
pub type NodeId = usize;

/// Undirected edge with an exact nonnegative length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    #[serde(with = "rational_str")]
    pub length: Rational,
}

impl Edge {
    /// The endpoint opposite `node`.
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A connected acyclic graph whose degree-1 nodes are labeled `1..=n`,
/// with exact rational edge lengths and an optional designated root.
///
/// Immutable after [`TreeBuilder::build`]; all methods are pure, so shared
/// concurrent reads are safe.
#[derive(Clone, Debug)]
pub struct WeightedTree {
    leaf_of_node: Vec<Option<usize>>,
    node_of_leaf: Vec<NodeId>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, usize)>>,
    root: Option<NodeId>,
    warnings: Vec<String>,
}

/// Incremental constructor: add nodes, connect them, optionally pick a
/// root, then [`TreeBuilder::build`] validates everything at once.
#[derive(Default)]
pub struct TreeBuilder {
    labels: Vec<Option<usize>>,
    edges: Vec<Edge>,
    root: Option<NodeId>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a leaf carrying `label` (labels must end up forming `1..=n`).
    pub fn add_leaf(&mut self, label: usize) -> NodeId {
        self.labels.push(Some(label));
        self.labels.len() - 1
    }

    /// Adds an anonymous internal node.
    pub fn add_internal(&mut self) -> NodeId {
        self.labels.push(None);
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, length: Rational) {
        self.edges.push(Edge { u, v, length });
    }

    pub fn set_root(&mut self, root: NodeId) {
        self.root = Some(root);
    }

    /// Turns an existing node into the leaf carrying `label` (used by the
    /// Newick parser for a labeled top node).
    pub(crate) fn set_label(&mut self, node: NodeId, label: usize) {
        self.labels[node] = Some(label);
    }

    /// If `node` is unlabeled with exactly two incident edges, merges those
    /// edges into one (lengths add) and removes the node, remapping ids.
    /// Newick renders unrooted trees under an artificial degree-2 top node;
    /// this undoes that. Returns whether a contraction happened.
    pub(crate) fn contract_degree_two_node(&mut self, node: NodeId) -> bool {
        if self.labels.get(node).copied().flatten().is_some() {
            return false;
        }
        let incident: Vec<usize> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.u == node || e.v == node)
            .map(|(i, _)| i)
            .collect();
        if incident.len() != 2 {
            return false;
        }
        let second = self.edges.remove(incident[1]);
        let first = self.edges.remove(incident[0]);
        let a = first.other(node);
        let b = second.other(node);
        let length = first.length + second.length;

        self.labels.remove(node);
        let fix = |x: NodeId| if x > node { x - 1 } else { x };
        for e in &mut self.edges {
            e.u = fix(e.u);
            e.v = fix(e.v);
        }
        self.edges.push(Edge {
            u: fix(a),
            v: fix(b),
            length,
        });
        self.root = match self.root {
            Some(r) if r == node => None,
            Some(r) => Some(fix(r)),
            None => None,
        };
        true
    }

    pub fn build(self) -> Result<WeightedTree, TreeError> {
        let TreeBuilder {
            labels,
            edges,
            root,
        } = self;
        let node_count = labels.len();
        if node_count < 2 {
            return Err(TreeError::NotATree(format!(
                "need at least 2 nodes, got {node_count}"
            )));
        }
        if edges.len() != node_count - 1 {
            return Err(TreeError::NotATree(format!(
                "{node_count} nodes need {} edges, got {}",
                node_count - 1,
                edges.len()
            )));
        }

        let mut adjacency: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); node_count];
        for (idx, e) in edges.iter().enumerate() {
            if e.u >= node_count || e.v >= node_count {
                return Err(TreeError::NotATree(format!(
                    "edge ({}, {}) references a missing node",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(TreeError::NotATree(format!("self-loop at node {}", e.u)));
            }
            if e.length < Rational::zero() {
                return Err(TreeError::NegativeLength {
                    u: e.u,
                    v: e.v,
                    length: e.length.clone(),
                });
            }
            adjacency[e.u].push((e.v, idx));
            adjacency[e.v].push((e.u, idx));
        }

        // Edge count is right, so connectivity implies acyclicity.
        let mut seen = vec![false; node_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(TreeError::NotATree("graph is disconnected".into()));
        }

        // Leaf labels must be a bijection with 1..=n.
        let n_leaves = labels.iter().flatten().count();
        let mut node_of_leaf = vec![usize::MAX; n_leaves];
        for (node, label) in labels.iter().enumerate() {
            let Some(label) = *label else { continue };
            if label == 0 || label > n_leaves {
                return Err(TreeError::NotATree(format!(
                    "leaf label {label} outside 1..={n_leaves}"
                )));
            }
            if node_of_leaf[label - 1] != usize::MAX {
                return Err(TreeError::NotATree(format!(
                    "duplicate leaf label {label}"
                )));
            }
            node_of_leaf[label - 1] = node;
        }
        if n_leaves < 2 {
            return Err(TreeError::NotATree(format!(
                "need at least 2 leaves, got {n_leaves}"
            )));
        }

        if let Some(r) = root {
            if r >= node_count {
                return Err(TreeError::NotATree(format!("root {r} is not a node")));
            }
        }

        // Degree constraints: labeled nodes are exactly the degree-1 nodes;
        // anonymous nodes need degree >= 3 unless they are the root
        // (a rooted top node may have just 2 children).
        let mut warnings = Vec::new();
        for (node, label) in labels.iter().enumerate() {
            let degree = adjacency[node].len();
            match label {
                Some(l) => {
                    if degree != 1 {
                        return Err(TreeError::NotATree(format!(
                            "leaf {l} has degree {degree}"
                        )));
                    }
                }
                None => {
                    let min_degree = if root == Some(node) { 2 } else { 3 };
                    if degree < min_degree {
                        return Err(TreeError::NotATree(format!(
                            "internal node {node} has degree {degree} (needs >= {min_degree})"
                        )));
                    }
                }
            }
        }
        for e in &edges {
            if e.length.is_zero() {
                let pendant = labels[e.u].is_some() || labels[e.v].is_some();
                let kind = if pendant { "pendant" } else { "internal" };
                warnings.push(format!(
                    "zero-length {kind} edge ({}, {}): realization is degenerate",
                    e.u, e.v
                ));
            }
        }

        Ok(WeightedTree {
            leaf_of_node: labels,
            node_of_leaf,
            edges,
            adjacency,
            root,
            warnings,
        })
    }
}

impl WeightedTree {
    pub fn n_leaves(&self) -> usize {
        self.node_of_leaf.len()
    }

    pub fn node_count(&self) -> usize {
        self.leaf_of_node.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    /// Same tree without a designated root.
    pub fn unrooted(&self) -> WeightedTree {
        let mut t = self.clone();
        t.root = None;
        t
    }

    /// Non-fatal validation findings (zero-length edges).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        self.leaf_of_node[node].is_some()
    }

    /// Label of `node` if it is a leaf.
    pub fn leaf_label(&self, node: NodeId) -> Option<usize> {
        self.leaf_of_node[node]
    }

    /// Node carrying leaf `label`.
    pub fn leaf_node(&self, label: usize) -> Result<NodeId, TreeError> {
        self.node_of_leaf
            .get(label.wrapping_sub(1))
            .copied()
            .ok_or(TreeError::UnknownLeaf(label))
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    /// Neighbors of `node` as `(neighbor, edge index)` pairs.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[node]
    }

    /// Exact length of the unique path between two leaves.
    pub fn leaf_distance(&self, i: usize, j: usize) -> Result<Rational, TreeError> {
        let u = self.leaf_node(i)?;
        let v = self.leaf_node(j)?;
        Ok(self.node_distance(u, v))
    }

    /// Exact length of the unique path between two nodes.
    pub fn node_distance(&self, u: NodeId, v: NodeId) -> Rational {
        self.path_edges(u, v)
            .into_iter()
            .map(|e| self.edges[e].length.clone())
            .sum()
    }

    /// Edge indices along the unique path from `u` to `v`.
    pub fn path_edges(&self, u: NodeId, v: NodeId) -> Vec<usize> {
        if u == v {
            return Vec::new();
        }
        let mut parent: Vec<Option<(NodeId, usize)>> = vec![None; self.node_count()];
        let mut stack = vec![u];
        let mut seen = vec![false; self.node_count()];
        seen[u] = true;
        'search: while let Some(x) = stack.pop() {
            for &(y, e) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    if y == v {
                        break 'search;
                    }
                    stack.push(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = v;
        while cur != u {
            let (p, e) = parent[cur].expect("tree is connected");
            path.push(e);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Total length of the smallest subtree containing every leaf in `s`
    /// (duplicates are ignored). An edge belongs to that subtree exactly
    /// when both of its removal components contain a leaf of `s`.
    pub fn steiner_weight(&self, s: &[usize]) -> Result<Rational, TreeError> {
        let mut marked = vec![false; self.node_count()];
        let mut total = 0usize;
        for &label in s {
            let node = self.leaf_node(label)?;
            if !marked[node] {
                marked[node] = true;
                total += 1;
            }
        }
        if total < 2 {
            return Err(TreeError::SteinerTooSmall(total));
        }

        // Count marked leaves in each "below" component via one DFS.
        let start = 0;
        let mut order = Vec::with_capacity(self.node_count());
        let mut parent_edge: Vec<Option<usize>> = vec![None; self.node_count()];
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &(y, e) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = Some(e);
                    stack.push(y);
                }
            }
        }
        let mut below = vec![0usize; self.node_count()];
        for &x in order.iter().rev() {
            if marked[x] {
                below[x] += 1;
            }
            if let Some(e) = parent_edge[x] {
                let p = self.edges[e].other(x);
                let c = below[x];
                below[p] += c;
            }
        }
        let mut weight = Rational::zero();
        for (x, pe) in parent_edge.iter().enumerate() {
            let Some(e) = pe else { continue };
            if below[x] > 0 && below[x] < total {
                weight += self.edges[*e].length.clone();
            }
        }
        Ok(weight)
    }

    /// Sum of all edge lengths.
    pub fn total_length(&self) -> Rational {
        self.edges.iter().map(|e| e.length.clone()).sum()
    }

    /// Hex SHA-256 of the pairwise leaf-distance table; equal for
    /// isomorphic trees regardless of node numbering.
    pub fn digest(&self) -> String {
        let n = self.n_leaves();
        let mut hasher = Sha256::new();
        hasher.update(format!("n={n};").as_bytes());
        for i in 1..=n {
            for j in (i + 1)..=n {
                let d = self.leaf_distance(i, j).expect("labels in range");
                hasher.update(format!("{i},{j}={d};").as_bytes());
            }
        }
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Serialize for WeightedTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Node {
            id: usize,
            leaf: Option<usize>,
        }
        let nodes: Vec<Node> = self
            .leaf_of_node
            .iter()
            .enumerate()
            .map(|(id, leaf)| Node { id, leaf: *leaf })
            .collect();
        let mut st = serializer.serialize_struct("WeightedTree", 4)?;
        st.serialize_field("n", &self.n_leaves())?;
        st.serialize_field("nodes", &nodes)?;
        st.serialize_field("edges", &self.edges)?;
        st.serialize_field("root", &self.root)?;
        st.end()
    }
}
