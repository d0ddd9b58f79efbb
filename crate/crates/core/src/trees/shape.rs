//! Combinatorial types of rooted binary trees with unlabeled leaves.

use std::collections::BTreeSet;

use crate::exact::Rational;
use num_traits::Zero;

use super::equidistant::EquidistantTree;
use super::weighted::TreeBuilder;
use super::TreeError;

/// An unordered rooted binary tree shape in canonical form: the two
/// children of every node are stored in sorted order, so structural
/// equality coincides with isomorphism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum TreeShape {
    Leaf,
    Node(Box<TreeShape>, Box<TreeShape>),
}

impl TreeShape {
    /// Joins two shapes under a new root, normalizing child order.
    pub fn join(a: TreeShape, b: TreeShape) -> TreeShape {
        if a <= b {
            TreeShape::Node(Box::new(a), Box::new(b))
        } else {
            TreeShape::Node(Box::new(b), Box::new(a))
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeShape::Leaf => 1,
            TreeShape::Node(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    pub fn internal_count(&self) -> usize {
        self.leaf_count().saturating_sub(1)
    }

    /// Compact text form: `L` for a leaf, `(ab)` for a node.
    pub fn encode(&self) -> String {
        match self {
            TreeShape::Leaf => "L".to_string(),
            TreeShape::Node(a, b) => format!("({}{})", a.encode(), b.encode()),
        }
    }

    /// Shape of a binary equidistant tree (errors on higher-degree nodes).
    pub fn of_equidistant(tree: &EquidistantTree) -> Result<TreeShape, TreeError> {
        fn rec(tree: &EquidistantTree, node: usize) -> Result<TreeShape, TreeError> {
            let children = tree.children(node);
            match children.len() {
                0 => Ok(TreeShape::Leaf),
                2 => Ok(TreeShape::join(
                    rec(tree, children[0])?,
                    rec(tree, children[1])?,
                )),
                d => Err(TreeError::NotBinary(node, d)),
            }
        }
        rec(tree, tree.root())
    }
}

/// All rooted binary shapes with `m` leaves, each exactly once, in
/// canonical order. Counts follow the Wedderburn-Etherington numbers:
/// 1, 1, 2, 3, 6, 11, 23, 46, 98 for m = 2..=10.
pub fn enumerate_shapes(m: usize) -> Result<Vec<TreeShape>, TreeError> {
    if m == 0 {
        return Err(TreeError::EmptyShape);
    }
    let mut by_size: Vec<Vec<TreeShape>> = vec![Vec::new(); m + 1];
    if m >= 1 {
        by_size[1] = vec![TreeShape::Leaf];
    }
    for size in 2..=m {
        let mut out = BTreeSet::new();
        for left in 1..=size / 2 {
            let right = size - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    if left == right && a > b {
                        continue;
                    }
                    out.insert(TreeShape::join(a.clone(), b.clone()));
                }
            }
        }
        by_size[size] = out.into_iter().collect();
    }
    Ok(by_size.swap_remove(m))
}

/// Builds the equidistant tree with the given shape and internal-node
/// heights. Heights are consumed in post-order (children before parents,
/// left subtree first), one per internal node, and must strictly increase
/// from child to parent; leaves sit at height zero and are labeled
/// `1..=m` left to right.
pub fn realize_shape(
    shape: &TreeShape,
    heights: &[Rational],
) -> Result<EquidistantTree, TreeError> {
    let expected = shape.internal_count();
    if heights.len() != expected {
        return Err(TreeError::WrongHeightCount {
            expected,
            got: heights.len(),
        });
    }
    for h in heights {
        if h <= &Rational::zero() {
            return Err(TreeError::NonMonotoneHeights);
        }
    }

    let mut builder = TreeBuilder::new();
    let mut next_leaf = 1usize;
    let mut next_internal = 0usize;

    fn rec(
        shape: &TreeShape,
        heights: &[Rational],
        builder: &mut TreeBuilder,
        next_leaf: &mut usize,
        next_internal: &mut usize,
    ) -> Result<(usize, Rational), TreeError> {
        match shape {
            TreeShape::Leaf => {
                let id = builder.add_leaf(*next_leaf);
                *next_leaf += 1;
                Ok((id, Rational::zero()))
            }
            TreeShape::Node(a, b) => {
                let (left, hl) = rec(a, heights, builder, next_leaf, next_internal)?;
                let (right, hr) = rec(b, heights, builder, next_leaf, next_internal)?;
                let h = heights[*next_internal].clone();
                *next_internal += 1;
                if h <= hl || h <= hr {
                    return Err(TreeError::NonMonotoneHeights);
                }
                let id = builder.add_internal();
                builder.add_edge(id, left, &h - &hl);
                builder.add_edge(id, right, &h - &hr);
                Ok((id, h))
            }
        }
    }

    let (root, _) = rec(shape, heights, &mut builder, &mut next_leaf, &mut next_internal)?;
    builder.set_root(root);
    EquidistantTree::from_weighted(builder.build()?)
}
