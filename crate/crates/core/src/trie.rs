//! Aho-Corasick trie of a pattern set: every prefix of every pattern is a
//! node, with classical failure (suffix) links.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::pattern_set::PatternSet;
use crate::tree::{NodeId, PrefixTree};

/// Node arena for the trie. Children are stored in one flat array
/// partitioned per parent and sorted by incoming byte.
#[derive(Debug, Clone)]
pub struct AcTrie {
    patterns: Arc<PatternSet>,
    parent: Vec<NodeId>,
    label: Vec<u8>,
    depth: Vec<u32>,
    witness: Vec<u32>,
    pattern: Vec<Option<u32>>,
    suffix_link: Vec<NodeId>,
    child_start: Vec<u32>,
    child_ids: Vec<NodeId>,
    leaf_of: Vec<NodeId>,
}

impl AcTrie {
    /// Builds the trie and its suffix links in `O(||P||)` expected time.
    pub fn build(patterns: impl Into<Arc<PatternSet>>) -> Self {
        let patterns: Arc<PatternSet> = patterns.into();
        let cap = patterns.total_length() + 1;
        let mut parent = Vec::with_capacity(cap);
        let mut label = Vec::with_capacity(cap);
        let mut depth = Vec::with_capacity(cap);
        let mut witness = Vec::with_capacity(cap);
        parent.push(NodeId::ROOT);
        label.push(0);
        depth.push(0);
        witness.push(0);

        let mut goto: HashMap<u64, NodeId> = HashMap::with_capacity(cap);
        let mut leaf_of = Vec::with_capacity(patterns.len());
        for (index, p) in patterns.iter().enumerate() {
            let mut v = NodeId::ROOT;
            for (offset, &b) in p.iter().enumerate() {
                let key = (u64::from(v.0) << 8) | u64::from(b);
                v = *goto.entry(key).or_insert_with(|| {
                    let id = NodeId::new(parent.len());
                    parent.push(v);
                    label.push(b);
                    depth.push(offset as u32 + 1);
                    witness.push(index as u32);
                    id
                });
            }
            leaf_of.push(v);
        }
        drop(goto);

        let count = parent.len();
        let mut pattern = vec![None; count];
        for (index, leaf) in leaf_of.iter().enumerate() {
            pattern[leaf.index()] = Some(index as u32);
        }

        // Children grouped by parent, each group sorted by byte: bucket the
        // nodes by label first, then place them stably into parent slots.
        let mut child_start = vec![0u32; count + 1];
        for v in 1..count {
            child_start[parent[v].index() + 1] += 1;
        }
        for i in 1..=count {
            child_start[i] += child_start[i - 1];
        }
        let mut by_label = vec![0u32; 257];
        for &b in &label[1..] {
            by_label[b as usize + 1] += 1;
        }
        for i in 1..257 {
            by_label[i] += by_label[i - 1];
        }
        let mut label_sorted = vec![NodeId::ROOT; count - 1];
        for v in 1..count {
            let slot = &mut by_label[label[v] as usize];
            label_sorted[*slot as usize] = NodeId::new(v);
            *slot += 1;
        }
        let mut fill: Vec<u32> = child_start[..count].to_vec();
        let mut child_ids = vec![NodeId::ROOT; count - 1];
        for v in label_sorted {
            let slot = &mut fill[parent[v.index()].index()];
            child_ids[*slot as usize] = v;
            *slot += 1;
        }

        let mut trie = AcTrie {
            patterns,
            parent,
            label,
            depth,
            witness,
            pattern,
            suffix_link: vec![NodeId::ROOT; count],
            child_start,
            child_ids,
            leaf_of,
        };
        trie.link_suffixes();
        debug_assert!(trie
            .leaf_of
            .iter()
            .all(|&leaf| trie.children(leaf).is_empty()));
        trie
    }

    // Breadth-first: a child's link is found by following its parent's link
    // chain until some node has a transition on the child's byte.
    fn link_suffixes(&mut self) {
        let mut queue = VecDeque::from([NodeId::ROOT]);
        while let Some(u) = queue.pop_front() {
            let range = self.child_range(u);
            for slot in range {
                let c = self.child_ids[slot];
                queue.push_back(c);
                if u.is_root() {
                    continue;
                }
                let b = self.label[c.index()];
                let mut f = self.suffix_link[u.index()];
                let link = loop {
                    if let Some(next) = self.child(f, b) {
                        break next;
                    }
                    if f.is_root() {
                        break NodeId::ROOT;
                    }
                    f = self.suffix_link[f.index()];
                };
                self.suffix_link[c.index()] = link;
            }
        }
    }

    fn child_range(&self, v: NodeId) -> std::ops::Range<usize> {
        self.child_start[v.index()] as usize..self.child_start[v.index() + 1] as usize
    }

    /// Transition from `v` on byte `b`, if any.
    pub fn child(&self, v: NodeId, b: u8) -> Option<NodeId> {
        let kids = &self.child_ids[self.child_range(v)];
        kids.binary_search_by_key(&b, |c| self.label[c.index()])
            .ok()
            .map(|i| kids[i])
    }

    /// Byte on the edge entering `v`. Meaningless for the root.
    pub fn incoming_label(&self, v: NodeId) -> u8 {
        self.label[v.index()]
    }

    /// Node spelling `s`, if `s` is a prefix of some pattern.
    pub fn find(&self, s: &[u8]) -> Option<NodeId> {
        s.iter().try_fold(NodeId::ROOT, |v, &b| self.child(v, b))
    }

    pub fn shared_patterns(&self) -> &Arc<PatternSet> {
        &self.patterns
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn internal_count(&self) -> usize {
        self.node_count() - self.leaf_count() - 1
    }
}

impl PrefixTree for AcTrie {
    fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    fn node_count(&self) -> usize {
        self.parent.len()
    }

    fn parent(&self, v: NodeId) -> Option<NodeId> {
        (!v.is_root()).then(|| self.parent[v.index()])
    }

    fn children(&self, v: NodeId) -> &[NodeId] {
        &self.child_ids[self.child_range(v)]
    }

    fn suffix_link(&self, v: NodeId) -> NodeId {
        self.suffix_link[v.index()]
    }

    fn depth(&self, v: NodeId) -> usize {
        self.depth[v.index()] as usize
    }

    fn witness(&self, v: NodeId) -> usize {
        self.witness[v.index()] as usize
    }

    fn pattern(&self, v: NodeId) -> Option<usize> {
        self.pattern[v.index()].map(|p| p as usize)
    }

    fn leaf_of(&self, index: usize) -> NodeId {
        self.leaf_of[index]
    }
}
