//! Contracted overlap graphs: the trie, EHOG and HOG as trees of kept
//! prefixes with slice-labelled edges and recomputed suffix links.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{HogError, Result};
use crate::pattern_set::PatternSet;
use crate::tree::{depth_order, NodeId, PrefixTree};
use crate::trie::AcTrie;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Trie,
    Ehog,
    Hog,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Trie => "trie",
            GraphKind::Ehog => "ehog",
            GraphKind::Hog => "hog",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trie" => Ok(GraphKind::Trie),
            "ehog" => Ok(GraphKind::Ehog),
            "hog" => Ok(GraphKind::Hog),
            other => Err(format!(
                "unknown graph kind `{other}` (expected hog|ehog|trie)"
            )),
        }
    }
}

/// Edge label as a byte range of one pattern; never materialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelSlice {
    pub pattern: u32,
    pub start: u32,
    pub end: u32,
}

impl LabelSlice {
    pub fn bytes<'p>(&self, patterns: &'p PatternSet) -> &'p [u8] {
        &patterns[self.pattern as usize][self.start as usize..self.end as usize]
    }

    pub fn len(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// A tree of pattern prefixes (root, kept internal nodes, one leaf per
/// pattern) with tree edges to the longest proper prefix in the node set and
/// suffix links to the longest proper suffix in the node set.
///
/// Node ids follow breadth-first order with children in lexicographic order.
#[derive(Debug, Clone)]
pub struct OverlapGraph {
    kind: GraphKind,
    patterns: Arc<PatternSet>,
    parent: Vec<Option<NodeId>>,
    label: Vec<Option<LabelSlice>>,
    child_start: Vec<u32>,
    child_ids: Vec<NodeId>,
    suffix_link: Vec<NodeId>,
    depth: Vec<u32>,
    witness: Vec<u32>,
    pattern: Vec<Option<u32>>,
    leaf_of: Vec<NodeId>,
    base_id: Vec<NodeId>,
}

impl OverlapGraph {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn shared_patterns(&self) -> &Arc<PatternSet> {
        &self.patterns
    }

    /// Label of the tree edge entering `v`; `None` for the root.
    pub fn label(&self, v: NodeId) -> Option<LabelSlice> {
        self.label[v.index()]
    }

    /// Id of `v` in the structure this graph was contracted from.
    pub fn base_id(&self, v: NodeId) -> NodeId {
        self.base_id[v.index()]
    }

    pub fn internal_count(&self) -> usize {
        self.node_count() - self.leaf_of.len() - 1
    }

    /// Internal nodes in id order.
    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count())
            .map(NodeId::new)
            .filter(|&v| self.is_internal(v))
    }
}

impl PrefixTree for OverlapGraph {
    fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    fn node_count(&self) -> usize {
        self.parent.len()
    }

    fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v.index()]
    }

    fn children(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        &self.child_ids[self.child_start[i] as usize..self.child_start[i + 1] as usize]
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

/// Access to the shared pattern set of a base structure, so contraction can
/// hand it to the new graph without copying.
pub trait SharedPatterns {
    fn shared(&self) -> Arc<PatternSet>;
}

impl SharedPatterns for AcTrie {
    fn shared(&self) -> Arc<PatternSet> {
        Arc::clone(self.shared_patterns())
    }
}

impl SharedPatterns for OverlapGraph {
    fn shared(&self) -> Arc<PatternSet> {
        Arc::clone(&self.patterns)
    }
}

/// Removes every base node with `keep` unset, re-attaching its children to
/// the nearest kept ancestor and widening their labels backwards.
///
/// `keep` must hold the root and every leaf. Runs in `O(|base|)`.
pub fn contract<T>(base: &T, keep: &[bool], kind: GraphKind) -> Result<OverlapGraph>
where
    T: PrefixTree + SharedPatterns + ?Sized,
{
    let count = base.node_count();
    if keep.len() != count {
        return Err(HogError::Invariant(format!(
            "keep flags cover {} nodes, base has {count}",
            keep.len()
        )));
    }
    if !keep[NodeId::ROOT.index()] {
        return Err(HogError::Invariant("the root must be kept".into()));
    }
    if let Some(x) = (0..base.patterns().len()).find(|&x| !keep[base.leaf_of(x).index()]) {
        return Err(HogError::Invariant(format!(
            "leaf of pattern #{x} must be kept"
        )));
    }

    // Preorder walk; `anchor[v]` is the provisional id of v's nearest kept
    // ancestor-or-self. Kept nodes get provisional ids in preorder, so each
    // parent's children are recorded in lexicographic order.
    let mut anchor = vec![0u32; count];
    let mut pre_base: Vec<NodeId> = vec![NodeId::ROOT];
    let mut pre_parent: Vec<u32> = vec![0];
    let mut stack: Vec<NodeId> = base.children(NodeId::ROOT).iter().rev().copied().collect();
    while let Some(v) = stack.pop() {
        let up = anchor[base.parent(v).expect("non-root has a parent").index()];
        if keep[v.index()] {
            anchor[v.index()] = pre_base.len() as u32;
            pre_base.push(v);
            pre_parent.push(up);
        } else {
            anchor[v.index()] = up;
        }
        stack.extend(base.children(v).iter().rev().copied());
    }
    drop(anchor);

    // Children lists over provisional ids, then breadth-first renumbering.
    let kept = pre_base.len();
    let mut pre_start = vec![0u32; kept + 1];
    for &p in &pre_parent[1..] {
        pre_start[p as usize + 1] += 1;
    }
    for i in 1..=kept {
        pre_start[i] += pre_start[i - 1];
    }
    let mut fill = pre_start[..kept].to_vec();
    let mut pre_children = vec![0u32; kept.saturating_sub(1)];
    for (t, &p) in pre_parent.iter().enumerate().skip(1) {
        let slot = &mut fill[p as usize];
        pre_children[*slot as usize] = t as u32;
        *slot += 1;
    }
    let mut bfs: Vec<u32> = Vec::with_capacity(kept);
    let mut final_id = vec![0u32; kept];
    let mut queue = VecDeque::from([0u32]);
    while let Some(t) = queue.pop_front() {
        final_id[t as usize] = bfs.len() as u32;
        bfs.push(t);
        let range = pre_start[t as usize] as usize..pre_start[t as usize + 1] as usize;
        queue.extend(pre_children[range].iter().copied());
    }

    let mut parent = Vec::with_capacity(kept);
    let mut label = Vec::with_capacity(kept);
    let mut depth = Vec::with_capacity(kept);
    let mut witness = Vec::with_capacity(kept);
    let mut pattern = Vec::with_capacity(kept);
    let mut base_id = Vec::with_capacity(kept);
    let mut child_start = Vec::with_capacity(kept + 1);
    let mut child_ids = Vec::with_capacity(kept.saturating_sub(1));
    let mut leaf_of = vec![NodeId::ROOT; base.patterns().len()];
    child_start.push(0u32);
    for (g, &t) in bfs.iter().enumerate() {
        let v = pre_base[t as usize];
        let d = base.depth(v) as u32;
        let w = base.witness(v) as u32;
        if t == 0 {
            parent.push(None);
            label.push(None);
        } else {
            let up = pre_parent[t as usize] as usize;
            parent.push(Some(NodeId(final_id[up])));
            label.push(Some(LabelSlice {
                pattern: w,
                start: base.depth(pre_base[up]) as u32,
                end: d,
            }));
        }
        let range = pre_start[t as usize] as usize..pre_start[t as usize + 1] as usize;
        child_ids.extend(
            pre_children[range]
                .iter()
                .map(|&c| NodeId(final_id[c as usize])),
        );
        child_start.push(child_ids.len() as u32);
        depth.push(d);
        witness.push(w);
        let p = base.pattern(v);
        if let Some(x) = p {
            leaf_of[x] = NodeId::new(g);
        }
        pattern.push(p.map(|x| x as u32));
        base_id.push(v);
    }

    let suffix_link = recompute_suffix_links(base, keep, &base_id);
    Ok(OverlapGraph {
        kind,
        patterns: base.shared(),
        parent,
        label,
        child_start,
        child_ids,
        suffix_link,
        depth,
        witness,
        pattern,
        leaf_of,
        base_id,
    })
}

/// Suffix links of a contraction: the first kept node on each kept node's
/// base suffix chain, indexed by contracted id. `graph_to_base[g]` is the
/// base node behind contracted node `g`.
///
/// Each base node's first kept suffix is resolved once, shortest strings
/// first, so the total cost is `O(|base|)`.
pub fn recompute_suffix_links<T: PrefixTree + ?Sized>(
    base: &T,
    keep: &[bool],
    graph_to_base: &[NodeId],
) -> Vec<NodeId> {
    let count = base.node_count();
    let mut to_graph = vec![u32::MAX; count];
    for (g, v) in graph_to_base.iter().enumerate() {
        to_graph[v.index()] = g as u32;
    }
    // first kept node on the chain starting at (and including) v
    let mut first_kept = vec![NodeId::ROOT; count];
    for v in depth_order(base) {
        if !v.is_root() {
            first_kept[v.index()] = if keep[v.index()] {
                v
            } else {
                first_kept[base.suffix_link(v).index()]
            };
        }
    }
    graph_to_base
        .iter()
        .map(|&v| {
            if v.is_root() {
                NodeId::ROOT
            } else {
                NodeId(to_graph[first_kept[base.suffix_link(v).index()].index()])
            }
        })
        .collect()
}

/// The trie itself as an [`OverlapGraph`] (nothing contracted).
pub fn trie_graph(trie: &AcTrie) -> Result<OverlapGraph> {
    contract(trie, &vec![true; trie.node_count()], GraphKind::Trie)
}

/// Keeps exactly the internal nodes lying on some leaf's suffix path.
pub fn build_ehog<T>(base: &T) -> Result<OverlapGraph>
where
    T: PrefixTree + SharedPatterns + ?Sized,
{
    let mut keep = vec![false; base.node_count()];
    keep[NodeId::ROOT.index()] = true;
    for x in 0..base.patterns().len() {
        keep[base.leaf_of(x).index()] = true;
    }
    for x in 0..base.patterns().len() {
        let mut y = base.suffix_link(base.leaf_of(x));
        // the rest of a chain is already kept once a kept node is reached
        while !keep[y.index()] {
            keep[y.index()] = true;
            y = base.suffix_link(y);
        }
    }
    contract(base, &keep, GraphKind::Ehog)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trie(p: &[&str]) -> AcTrie {
        AcTrie::build(PatternSet::strict(p).unwrap())
    }

    fn s(g: &OverlapGraph, v: NodeId) -> String {
        String::from_utf8(g.node_bytes(v).to_vec()).unwrap()
    }

    fn by_name(g: &OverlapGraph, name: &str) -> NodeId {
        (0..g.node_count())
            .map(NodeId::new)
            .find(|&v| s(g, v) == name)
            .unwrap_or_else(|| panic!("no node {name}"))
    }

    fn internal_names(g: &OverlapGraph) -> Vec<String> {
        let mut v: Vec<String> = g.internal_nodes().map(|v| s(g, v)).collect();
        v.sort();
        v
    }

    fn edges(g: &OverlapGraph) -> Vec<(String, String, String)> {
        (1..g.node_count())
            .map(NodeId::new)
            .map(|v| {
                let p = g.parent(v).unwrap();
                let l = g.label(v).unwrap().bytes(g.patterns()).to_vec();
                (s(g, p), s(g, v), String::from_utf8(l).unwrap())
            })
            .collect()
    }

    fn links(g: &OverlapGraph) -> Vec<(String, String)> {
        (1..g.node_count())
            .map(NodeId::new)
            .map(|v| (s(g, v), s(g, g.suffix_link(v))))
            .collect()
    }

    fn keep_named(t: &AcTrie, names: &[&str]) -> Vec<bool> {
        let mut keep = vec![false; t.node_count()];
        keep[0] = true;
        for x in 0..t.patterns().len() {
            keep[t.leaf_of(x).index()] = true;
        }
        for n in names {
            keep[t.find(n.as_bytes()).unwrap().index()] = true;
        }
        keep
    }

    #[test]
    fn three_strings_hog_contraction() {
        let t = trie(&["aabaa", "aadbd", "dbdaa"]);
        let g = contract(&t, &keep_named(&t, &["aa", "dbd"]), GraphKind::Hog).unwrap();
        assert_eq!(g.node_count(), 6);
        let e = |a: &str, b: &str, l: &str| (a.to_string(), b.to_string(), l.to_string());
        assert_eq!(
            edges(&g),
            vec![
                e("", "aa", "aa"),
                e("", "dbd", "dbd"),
                e("aa", "aabaa", "baa"),
                e("aa", "aadbd", "dbd"),
                e("dbd", "dbdaa", "aa"),
            ]
        );
        let l = |a: &str, b: &str| (a.to_string(), b.to_string());
        assert_eq!(
            links(&g),
            vec![
                l("aa", ""),
                l("dbd", ""),
                l("aabaa", "aa"),
                l("aadbd", "dbd"),
                l("dbdaa", "aa"),
            ]
        );
        assert_eq!(g.suffix_link(NodeId::ROOT), NodeId::ROOT);
    }

    #[test]
    fn three_strings_ehog() {
        let t = trie(&["aabaa", "aadbd", "dbdaa"]);
        let g = build_ehog(&t).unwrap();
        assert_eq!(g.kind(), GraphKind::Ehog);
        assert_eq!(internal_names(&g), ["a", "aa", "d", "dbd"]);
        let link = |n: &str| s(&g, g.suffix_link(by_name(&g, n)));
        assert_eq!(link("aa"), "a");
        assert_eq!(link("dbd"), "d");
        assert_eq!(link("a"), "");
        assert_eq!(link("d"), "");
        assert_eq!(link("aadbd"), "dbd");
    }

    #[test]
    fn identity_contraction_matches_trie() {
        let t = trie(&["aabaa", "aadbd", "dbdaa"]);
        let g = trie_graph(&t).unwrap();
        assert_eq!(g.node_count(), t.node_count());
        for v in (0..g.node_count()).map(NodeId::new) {
            let tv = g.base_id(v);
            assert_eq!(g.node_bytes(v), t.node_bytes(tv));
            assert_eq!(
                g.node_bytes(g.suffix_link(v)),
                t.node_bytes(t.suffix_link(tv))
            );
            if let Some(l) = g.label(v) {
                assert_eq!(l.len(), 1);
            }
        }
    }

    #[test]
    fn star_without_overlaps() {
        let t = trie(&["ab", "cd"]);
        for g in [
            build_ehog(&t).unwrap(),
            contract(&t, &keep_named(&t, &[]), GraphKind::Hog).unwrap(),
        ] {
            assert_eq!(g.node_count(), 3);
            let e = |a: &str, b: &str| ("".to_string(), a.to_string(), b.to_string());
            assert_eq!(edges(&g), vec![e("ab", "ab"), e("cd", "cd")]);
        }
    }

    #[test]
    fn shared_first_byte_children_keep_lexicographic_order() {
        // "a" is dropped, so the root gets two children starting with 'a'
        let t = trie(&["ab", "ac"]);
        let g = contract(&t, &keep_named(&t, &[]), GraphKind::Hog).unwrap();
        let kids: Vec<String> = g.children(NodeId::ROOT).iter().map(|&c| s(&g, c)).collect();
        assert_eq!(kids, ["ab", "ac"]);
    }

    #[test]
    fn ehog_of_ehog_is_stable() {
        let t = trie(&["aabaa", "aadbd", "dbdaa", "baab", "abba"]);
        let e1 = build_ehog(&t).unwrap();
        let e2 = build_ehog(&e1).unwrap();
        assert_eq!(internal_names(&e1), internal_names(&e2));
        assert_eq!(links(&e1), links(&e2));
    }

    #[test]
    fn contract_rejects_dropped_leaf() {
        let t = trie(&["ab"]);
        let mut keep = vec![true; t.node_count()];
        keep[t.leaf_of(0).index()] = false;
        assert!(contract(&t, &keep, GraphKind::Hog).is_err());
        keep = vec![true; t.node_count()];
        keep[0] = false;
        assert!(contract(&t, &keep, GraphKind::Hog).is_err());
        assert!(contract(&t, &[true], GraphKind::Hog).is_err());
    }
}
