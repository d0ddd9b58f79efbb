//! Reference trees shared by tests, benchmarks, and CLI examples.

use crate::exact::rat;
use crate::trees::{EquidistantTree, TreeBuilder, TreeShape};

/// The worked-example equidistant 5-tree: cherries `{1,2}` (height 4) and
/// `{4,5}` (height 6), leaf 3 joining `{1,2}` at height 7, root at
/// height 10. Total length 37.
///
/// Edge insertion order is the order the edge families are read in the
/// worked example — `(r,v), (v,w), (w,1), (w,2), (v,3), (r,u), (u,4),
/// (u,5)` — so "the first 24 primes in order" assigns `a_1(r,v) = 2, ...,
/// a_3(u,5) = 89` when coefficients are numbered family-major by this
/// edge order.
pub fn example_5tree() -> EquidistantTree {
    let mut b = TreeBuilder::new();
    let l1 = b.add_leaf(1);
    let l2 = b.add_leaf(2);
    let l3 = b.add_leaf(3);
    let l4 = b.add_leaf(4);
    let l5 = b.add_leaf(5);
    let w = b.add_internal();
    let v = b.add_internal();
    let u = b.add_internal();
    let r = b.add_internal();
    b.add_edge(r, v, rat(3));
    b.add_edge(v, w, rat(3));
    b.add_edge(w, l1, rat(4));
    b.add_edge(w, l2, rat(4));
    b.add_edge(v, l3, rat(7));
    b.add_edge(r, u, rat(4));
    b.add_edge(u, l4, rat(6));
    b.add_edge(u, l5, rat(6));
    b.set_root(r);
    EquidistantTree::from_weighted(b.build().expect("valid fixture"))
        .expect("fixture is equidistant")
}

/// Shape of [`example_5tree`]: `((LL)L)` joined with `(LL)`.
pub fn example_5tree_shape() -> TreeShape {
    let cherry = || TreeShape::join(TreeShape::Leaf, TreeShape::Leaf);
    TreeShape::join(TreeShape::join(cherry(), TreeShape::Leaf), cherry())
}
