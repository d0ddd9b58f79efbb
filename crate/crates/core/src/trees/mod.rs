//! Weighted leaf-labeled trees, equidistant rooted trees, rooted binary
//! shapes, Newick I/O, and seeded random generation.
//!
//! A tree's leaves carry the labels `1..=n`; internal nodes are anonymous.
//! All edge lengths are exact rationals. Trees are immutable once built:
//! construction goes through [`TreeBuilder`], which validates the tree
//! invariants and records non-fatal oddities (zero-length edges) as
//! warnings.

mod equidistant;
mod newick;
mod random;
mod shape;
mod weighted;

pub use equidistant::EquidistantTree;
pub use newick::{format_newick, parse_newick};
pub use random::{random_equidistant, random_tree};
pub use shape::{enumerate_shapes, realize_shape, TreeShape};
pub use weighted::{Edge, NodeId, TreeBuilder, WeightedTree};

use crate::exact::Rational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    /// A leaf label outside `1..=n`.
    #[error("unknown leaf label {0}")]
    UnknownLeaf(usize),

    /// The node set / edge set does not form a valid labeled tree.
    #[error("not a valid tree: {0}")]
    NotATree(String),

    /// Edge lengths must be nonnegative.
    #[error("edge ({u}, {v}) has negative length {length}")]
    NegativeLength { u: usize, v: usize, length: Rational },

    /// Steiner subtrees need at least two distinct leaves.
    #[error("steiner weight needs at least 2 distinct leaves, got {0}")]
    SteinerTooSmall(usize),

    /// Operation requires a designated root.
    #[error("tree has no designated root")]
    NotRooted,

    /// Root-to-leaf distances differ, so the tree is not equidistant.
    #[error("not equidistant: leaves {leaf_a} and {leaf_b} are at different distances from the root")]
    NotEquidistant { leaf_a: usize, leaf_b: usize },

    /// Heights must strictly increase from child to parent.
    #[error("heights do not strictly increase toward the root")]
    NonMonotoneHeights,

    /// `attach_anchor` requires the new pendant edge to exceed the root height.
    #[error("anchor edge length {given} must exceed the root height {root_height}")]
    AnchorTooShort { given: Rational, root_height: Rational },

    /// Shape enumeration needs at least one leaf.
    #[error("tree shapes need at least 1 leaf")]
    EmptyShape,

    /// `realize_shape` received the wrong number of internal-node heights.
    #[error("shape has {expected} internal nodes but {got} heights were given")]
    WrongHeightCount { expected: usize, got: usize },

    /// Shape extraction is defined for binary trees only.
    #[error("tree is not binary: node {0} has {1} children")]
    NotBinary(usize, usize),

    /// Newick text could not be parsed.
    #[error("newick parse error at byte {position}: {message}")]
    Newick { position: usize, message: String },

    /// Random generation needs a nonempty universe of positive lengths.
    #[error("length universe must be nonempty and strictly positive")]
    BadLengthUniverse,

    /// Random generation needs enough leaves to be meaningful.
    #[error("need at least {need} leaves, got {got}")]
    TooFewLeaves { need: usize, got: usize },
}
