//! The rooted-tree view shared by the trie and the contracted graphs, and the
//! depth-first Euler traversal every marking algorithm consumes.

use std::collections::VecDeque;
use std::fmt;

use crate::pattern_set::PatternSet;

/// Dense index into a node arena. `NodeId::ROOT` is the empty string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn new(index: usize) -> Self {
        NodeId(u32::try_from(index).expect("node arena exceeds u32 range"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_root(self) -> bool {
        self == NodeId::ROOT
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A rooted tree whose nodes are prefixes of patterns, with suffix links.
///
/// Implemented by [`AcTrie`](crate::trie::AcTrie) and
/// [`OverlapGraph`](crate::graph::OverlapGraph) so that leaf lists, marking
/// and contraction run unchanged on either base structure.
pub trait PrefixTree {
    fn patterns(&self) -> &PatternSet;

    fn node_count(&self) -> usize;

    fn parent(&self, v: NodeId) -> Option<NodeId>;

    /// Children in ascending lexicographic order of their strings.
    fn children(&self, v: NodeId) -> &[NodeId];

    /// Longest proper suffix of `v` present in the tree. The root links to
    /// itself.
    fn suffix_link(&self, v: NodeId) -> NodeId;

    /// Length of the node's string.
    fn depth(&self, v: NodeId) -> usize;

    /// Index of a pattern that has this node's string as a prefix.
    fn witness(&self, v: NodeId) -> usize;

    /// Pattern index for leaves, `None` for the root and internal nodes.
    fn pattern(&self, v: NodeId) -> Option<usize>;

    /// Leaf node spelling pattern `index`.
    fn leaf_of(&self, index: usize) -> NodeId;

    fn node_bytes(&self, v: NodeId) -> &[u8] {
        &self.patterns()[self.witness(v)][..self.depth(v)]
    }

    fn is_leaf(&self, v: NodeId) -> bool {
        self.pattern(v).is_some()
    }

    fn is_internal(&self, v: NodeId) -> bool {
        !v.is_root() && self.pattern(v).is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerKind {
    FirstVisit,
    LastVisit,
    LeafVisit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerEvent {
    pub kind: EulerKind,
    pub node: NodeId,
}

impl EulerEvent {
    fn new(kind: EulerKind, node: NodeId) -> Self {
        EulerEvent { kind, node }
    }
}

/// Depth-first walk with children in order. Every non-leaf node, the root
/// included, produces a bracketing `FirstVisit`/`LastVisit` pair; each leaf
/// produces a single `LeafVisit`.
///
/// Uses an explicit stack, so pattern length never turns into call depth.
pub fn euler_traversal<T: PrefixTree + ?Sized>(tree: &T) -> Vec<EulerEvent> {
    let mut events = Vec::with_capacity(2 * tree.node_count());
    // (node, index of the next child to descend into)
    let mut stack: Vec<(NodeId, usize)> = vec![(NodeId::ROOT, 0)];
    events.push(EulerEvent::new(EulerKind::FirstVisit, NodeId::ROOT));
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        match tree.children(v).get(next) {
            Some(&child) => {
                top.1 += 1;
                if tree.is_leaf(child) {
                    events.push(EulerEvent::new(EulerKind::LeafVisit, child));
                } else {
                    events.push(EulerEvent::new(EulerKind::FirstVisit, child));
                    stack.push((child, 0));
                }
            }
            None => {
                events.push(EulerEvent::new(EulerKind::LastVisit, v));
                stack.pop();
            }
        }
    }
    events
}

/// Nodes in breadth-first order, children in order.
pub fn bfs_order<T: PrefixTree + ?Sized>(tree: &T) -> Vec<NodeId> {
    let mut order = Vec::with_capacity(tree.node_count());
    let mut queue = VecDeque::from([NodeId::ROOT]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        queue.extend(tree.children(v).iter().copied());
    }
    order
}

/// Nodes sorted by string length (counting sort, stable in id order). Every
/// node comes after its parent and after its suffix link.
pub fn depth_order<T: PrefixTree + ?Sized>(tree: &T) -> Vec<NodeId> {
    let n = tree.node_count();
    let max_depth = (0..n)
        .map(|i| tree.depth(NodeId::new(i)))
        .max()
        .unwrap_or(0);
    let mut start = vec![0usize; max_depth + 2];
    for i in 0..n {
        start[tree.depth(NodeId::new(i)) + 1] += 1;
    }
    for d in 1..start.len() {
        start[d] += start[d - 1];
    }
    let mut order = vec![NodeId::ROOT; n];
    for i in 0..n {
        let d = tree.depth(NodeId::new(i));
        order[start[d]] = NodeId::new(i);
        start[d] += 1;
    }
    order
}
