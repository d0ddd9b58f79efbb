//! Newick-style text format with exact rational branch lengths.
//!
//! Rooted trees are prefixed with the marker `[&R]`; without it the text is
//! read as an unrooted tree, and a degree-2 top node (the usual artifact of
//! writing an unrooted tree in a rooted format) is contracted away. Branch
//! lengths accept `p/q`, integer, and decimal literals; leaf names must be
//! the integers `1..=n`. Internal nodes carry no names.
//!
//! Example: the cherry `{1,2}` at height 1 under a root at height 3 with a
//! third leaf is `[&R]((1:1,2:1):2,3:3);`.

use crate::exact::{parse_rational, Rational};

use super::weighted::{NodeId, TreeBuilder, WeightedTree};
use super::TreeError;

/// Serializes a tree. Rooted trees render from their root with the `[&R]`
/// marker; unrooted trees render from the internal node adjacent to leaf 1
/// without a marker.
pub fn format_newick(tree: &WeightedTree) -> String {
    fn render(tree: &WeightedTree, node: NodeId, from: Option<NodeId>, out: &mut String) {
        let children: Vec<(NodeId, usize)> = tree
            .neighbors(node)
            .iter()
            .copied()
            .filter(|&(y, _)| Some(y) != from)
            .collect();
        if children.is_empty() {
            out.push_str(&tree.leaf_label(node).expect("degree-1 nodes are leaves").to_string());
            return;
        }
        out.push('(');
        for (k, (child, edge)) in children.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            render(tree, *child, Some(node), out);
            out.push(':');
            out.push_str(&tree.edges()[*edge].length.to_string());
        }
        out.push(')');
        if let Some(label) = tree.leaf_label(node) {
            out.push_str(&label.to_string());
        }
    }

    let mut out = String::new();
    match tree.root() {
        Some(root) => {
            out.push_str("[&R]");
            render(tree, root, None, &mut out);
        }
        None => {
            // An unrooted tree with n >= 3 has an internal node next to
            // leaf 1; for n = 2 render leaf 2 as top with the single child 1.
            let leaf1 = tree.leaf_node(1).expect("leaf 1 exists");
            let start = if tree.n_leaves() == 2 {
                tree.leaf_node(2).expect("leaf 2 exists")
            } else {
                tree.neighbors(leaf1)[0].0
            };
            render(tree, start, None, &mut out);
        }
    }
    out.push(';');
    out
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    builder: TreeBuilder,
}

type Parsed = (NodeId, bool); // (node, was a bare leaf token)

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> TreeError {
        TreeError::Newick {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), TreeError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {:?}", b as char)))
        }
    }

    /// subtree := "(" subtree ":" length ("," subtree ":" length)* ")" | leaf
    fn subtree(&mut self) -> Result<Parsed, TreeError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let node = self.builder.add_internal();
                loop {
                    let (child, _) = self.subtree()?;
                    self.expect(b':')?;
                    let length = self.length()?;
                    self.builder.add_edge(node, child, length);
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ')'")),
                    }
                }
                // An optional label after ')' is a labeled top node (the
                // n = 2 rendering "(1:L)2;"); degree checks at build time
                // reject it anywhere a leaf cannot go.
                if matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                    let label = self.integer()?;
                    self.builder.set_label(node, label);
                }
                Ok((node, false))
            }
            Some(b) if b.is_ascii_digit() => {
                let label = self.integer()?;
                Ok((self.builder.add_leaf(label), true))
            }
            _ => Err(self.error("expected '(' or a leaf label")),
        }
    }

    fn integer(&mut self) -> Result<usize, TreeError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer leaf label"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.error("leaf label out of range"))
    }

    fn length(&mut self) -> Result<Rational, TreeError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && matches!(self.bytes[self.pos], b'0'..=b'9' | b'/' | b'.' | b'-' | b'+')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a branch length"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii slice");
        parse_rational(text).map_err(|e| self.error(e.to_string()))
    }
}

/// Parses Newick text produced by [`format_newick`] (or compatible input).
/// Error positions are byte offsets into `text` as given, so callers can
/// translate them to line and column numbers.
pub fn parse_newick(text: &str) -> Result<WeightedTree, TreeError> {
    let start = text.len() - text.trim_start().len();
    let (rooted, pos) = match text[start..].strip_prefix("[&R]") {
        Some(_) => (true, start + "[&R]".len()),
        None => (false, start),
    };
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos,
        builder: TreeBuilder::new(),
    };

    let (top_node, bare_leaf) = parser.subtree()?;
    parser.expect(b';')?;
    if parser.peek().is_some() {
        return Err(parser.error("trailing characters after ';'"));
    }
    if bare_leaf {
        return Err(parser.error("tree must have more than one node"));
    }

    let mut builder = parser.builder;
    if rooted {
        builder.set_root(top_node);
        return builder.build();
    }

    // Unrooted: a degree-2 anonymous top node is a rendering artifact.
    builder.contract_degree_two_node(top_node);
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::trees::equidistant::EquidistantTree;

    #[test]
    fn rooted_round_trip() {
        let mut b = TreeBuilder::new();
        let l1 = b.add_leaf(1);
        let l2 = b.add_leaf(2);
        let l3 = b.add_leaf(3);
        let w = b.add_internal();
        let r = b.add_internal();
        b.add_edge(w, l1, rat(1));
        b.add_edge(w, l2, rat(1));
        b.add_edge(r, w, rat(2));
        b.add_edge(r, l3, rat(3));
        b.set_root(r);
        let t = b.build().unwrap();

        let text = format_newick(&t);
        assert!(text.starts_with("[&R]"));
        let back = parse_newick(&text).unwrap();
        assert!(back.root().is_some());
        assert_eq!(back.digest(), t.digest());
        assert!(EquidistantTree::from_weighted(back).is_ok());
    }

    #[test]
    fn unrooted_round_trip_contracts_top() {
        let text = "((1:4,2:4):3,3:7);";
        let t = parse_newick(text).unwrap();
        assert_eq!(t.root(), None);
        assert_eq!(t.leaf_distance(1, 2).unwrap(), rat(8));
        assert_eq!(t.leaf_distance(1, 3).unwrap(), rat(14));
        // Degree-2 top was contracted: 4 nodes remain (3 leaves + 1 fork).
        assert_eq!(t.node_count(), 4);
        let again = parse_newick(&format_newick(&t)).unwrap();
        assert_eq!(again.digest(), t.digest());
    }

    #[test]
    fn two_leaf_tree_round_trips() {
        let mut b = TreeBuilder::new();
        let l1 = b.add_leaf(1);
        let l2 = b.add_leaf(2);
        b.add_edge(l1, l2, ratio(7, 2));
        let t = b.build().unwrap();
        let text = format_newick(&t);
        let back = parse_newick(&text).unwrap();
        assert_eq!(back.leaf_distance(1, 2).unwrap(), ratio(7, 2));
    }

    #[test]
    fn rational_and_decimal_lengths() {
        let t = parse_newick("[&R]((1:1/2,2:0.5):2,3:5/2);").unwrap();
        assert_eq!(t.leaf_distance(1, 2).unwrap(), rat(1));
        assert_eq!(t.leaf_distance(1, 3).unwrap(), rat(5));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        for bad in [
            "",
            "(1:1,2:1)",          // missing ';'
            "(1:1 2:1);",         // missing comma
            "((1:1,2:1):1;",      // unbalanced
            "(x:1,2:1);",         // non-integer label
            "(1:a,2:1);",         // bad length
            "(1:1,2:1); extra",   // trailing junk
            "1;",                 // single node
        ] {
            assert!(
                matches!(parse_newick(bad), Err(TreeError::Newick { .. })),
                "should reject {bad:?}"
            );
        }
    }

    #[test]
    fn negative_length_is_a_tree_error() {
        assert!(matches!(
            parse_newick("(1:-1,2:1,3:1);"),
            Err(TreeError::NegativeLength { .. })
        ));
    }
}
