//! Deciding which internal nodes are longest overlaps `ov(x, v)` of some
//! ordered pair of patterns.
//!
//! A node `u` is `ov(x, v)` exactly when `u` is an ancestor of leaf `v`,
//! `x` is in `L_u`, and no deeper ancestor of `v` has `x` in its list. Three
//! interchangeable procedures compute the union over all pairs:
//!
//! * [`mark_all_per_leaf`] walks each leaf's ancestor path separately;
//! * [`mark_all_quadratic`] shares the walk through one Euler traversal,
//!   keeping a stack per pattern, and inspects every stack at every leaf;
//! * [`mark_all_optimal`] additionally tracks which stacks have an unmarked
//!   top, so each leaf touches only those.
//!
//! All three count elementary steps in `op_counter`: one unit per event,
//! push, pop, pending-list insertion or removal, mark, and (for the
//! quadratic sweep) per stack inspected at a leaf.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{HogError, Result};
use crate::leaf_lists::LeafLists;
use crate::tree::{EulerEvent, EulerKind, NodeId, PrefixTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    PerLeaf,
    Quadratic,
    Optimal,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::PerLeaf, Algorithm::Quadratic, Algorithm::Optimal];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::PerLeaf => "per-leaf",
            Algorithm::Quadratic => "quadratic",
            Algorithm::Optimal => "optimal",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-leaf" | "per_leaf" => Ok(Algorithm::PerLeaf),
            "quadratic" => Ok(Algorithm::Quadratic),
            "optimal" => Ok(Algorithm::Optimal),
            other => Err(format!(
                "unknown algorithm `{other}` (expected per-leaf|quadratic|optimal)"
            )),
        }
    }
}

/// Working state of a stack sweep. Exposed read-only to observers.
#[derive(Debug, Clone)]
pub struct MarkState {
    in_hog: Vec<bool>,
    stacks: Vec<Vec<NodeId>>,
    pending: Vec<u32>,
    in_pending: Vec<bool>,
    op_counter: u64,
    marks: u64,
    stack_entries: usize,
    peak_stack_entries: usize,
}

impl MarkState {
    fn new<T: PrefixTree + ?Sized>(tree: &T) -> Self {
        let n = tree.patterns().len();
        MarkState {
            in_hog: initial_flags(tree),
            stacks: vec![Vec::new(); n],
            pending: Vec::new(),
            in_pending: vec![false; n],
            op_counter: 0,
            marks: 0,
            stack_entries: 0,
            peak_stack_entries: 0,
        }
    }

    pub fn in_hog(&self) -> &[bool] {
        &self.in_hog
    }

    /// Stack of pattern `x`, bottom first.
    pub fn stack(&self, x: usize) -> &[NodeId] {
        &self.stacks[x]
    }

    /// Patterns whose stacks are queued for marking at the next leaf.
    pub fn pending(&self) -> &[u32] {
        &self.pending
    }

    pub fn is_pending(&self, x: usize) -> bool {
        self.in_pending[x]
    }

    pub fn op_counter(&self) -> u64 {
        self.op_counter
    }

    pub fn marks(&self) -> u64 {
        self.marks
    }

    fn push(&mut self, x: usize, v: NodeId) {
        self.stacks[x].push(v);
        self.op_counter += 1;
        self.stack_entries += 1;
        self.peak_stack_entries = self.peak_stack_entries.max(self.stack_entries);
    }

    fn pop(&mut self, x: usize, v: NodeId) -> Result<()> {
        self.op_counter += 1;
        match self.stacks[x].pop() {
            Some(top) if top == v => {
                self.stack_entries -= 1;
                Ok(())
            }
            found => Err(HogError::PopMismatch {
                pattern: x,
                expected: v.index(),
                found: found.map(NodeId::index),
            }),
        }
    }

    fn enqueue(&mut self, x: usize) {
        if !self.in_pending[x] {
            self.in_pending[x] = true;
            self.pending.push(x as u32);
            self.op_counter += 1;
        }
    }

    fn mark(&mut self, v: NodeId) {
        self.in_hog[v.index()] = true;
        self.marks += 1;
        self.op_counter += 1;
    }

    fn finish(self, algorithm: Algorithm) -> MarkResult {
        MarkResult {
            algorithm,
            in_hog: self.in_hog,
            op_counter: self.op_counter,
            marks: self.marks,
            peak_stack_entries: self.peak_stack_entries,
        }
    }
}

/// Root and leaves are members from the start; internal nodes are not.
fn initial_flags<T: PrefixTree + ?Sized>(tree: &T) -> Vec<bool> {
    let mut flags = vec![false; tree.node_count()];
    flags[NodeId::ROOT.index()] = true;
    for x in 0..tree.patterns().len() {
        flags[tree.leaf_of(x).index()] = true;
    }
    flags
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkResult {
    pub algorithm: Algorithm,
    /// Membership flag per node of the base structure.
    pub in_hog: Vec<bool>,
    pub op_counter: u64,
    /// Number of individual mark operations performed.
    pub marks: u64,
    /// Largest number of entries held by all stacks at once (zero for the
    /// per-leaf procedure, which keeps no stacks).
    pub peak_stack_entries: usize,
}

impl MarkResult {
    /// Marked internal nodes in id order.
    pub fn marked_internal<T: PrefixTree + ?Sized>(&self, tree: &T) -> Vec<NodeId> {
        (0..self.in_hog.len())
            .map(NodeId::new)
            .filter(|&v| self.in_hog[v.index()] && tree.is_internal(v))
            .collect()
    }
}

/// Deepest ancestor of `leaf` holding each pattern in its list, i.e. the
/// nodes `ov(x, leaf)` for every `x` with a non-empty overlap onto `leaf`.
pub fn mark_single_leaf<T: PrefixTree + ?Sized>(
    tree: &T,
    lists: &LeafLists,
    leaf: NodeId,
) -> BTreeSet<NodeId> {
    let mut scratch = LeafScratch::new(tree.patterns().len());
    let mut ops = 0;
    scratch.scan(tree, lists, leaf, &mut ops);
    scratch
        .touched
        .iter()
        .map(|&x| scratch.last[x as usize].unwrap())
        .collect()
}

struct LeafScratch {
    last: Vec<Option<NodeId>>,
    touched: Vec<u32>,
    path: Vec<NodeId>,
}

impl LeafScratch {
    fn new(n: usize) -> Self {
        LeafScratch {
            last: vec![None; n],
            touched: Vec::new(),
            path: Vec::new(),
        }
    }

    fn scan<T: PrefixTree + ?Sized>(
        &mut self,
        tree: &T,
        lists: &LeafLists,
        leaf: NodeId,
        ops: &mut u64,
    ) {
        for &x in &self.touched {
            self.last[x as usize] = None;
        }
        self.touched.clear();
        self.path.clear();
        let mut v = tree.parent(leaf);
        while let Some(u) = v {
            self.path.push(u);
            v = tree.parent(u);
        }
        // root to leaf, so deeper nodes overwrite shallower ones
        for &y in self.path.iter().rev() {
            *ops += 1;
            for &x in lists.get(y) {
                *ops += 1;
                let slot = &mut self.last[x as usize];
                if slot.is_none() {
                    self.touched.push(x);
                }
                *slot = Some(y);
            }
        }
    }
}

/// Applies [`mark_single_leaf`] to every leaf and takes the union.
pub fn mark_all_per_leaf<T: PrefixTree + ?Sized>(tree: &T, lists: &LeafLists) -> MarkResult {
    let mut in_hog = initial_flags(tree);
    let mut scratch = LeafScratch::new(tree.patterns().len());
    let mut ops = 0u64;
    let mut marks = 0u64;
    for index in 0..tree.patterns().len() {
        scratch.scan(tree, lists, tree.leaf_of(index), &mut ops);
        for &x in &scratch.touched {
            in_hog[scratch.last[x as usize].unwrap().index()] = true;
            marks += 1;
            ops += 1;
        }
    }
    MarkResult {
        algorithm: Algorithm::PerLeaf,
        in_hog,
        op_counter: ops,
        marks,
        peak_stack_entries: 0,
    }
}

/// Stack sweep that inspects every pattern's stack at every leaf:
/// `O(||P|| + n^2)` steps.
pub fn mark_all_quadratic<T: PrefixTree + ?Sized>(
    tree: &T,
    lists: &LeafLists,
    events: &[EulerEvent],
) -> Result<MarkResult> {
    sweep(tree, lists, events, Algorithm::Quadratic, &mut |_, _| {})
}

/// Stack sweep that only visits stacks whose top is unmarked: `O(||P||)`
/// steps.
pub fn mark_all_optimal<T: PrefixTree + ?Sized>(
    tree: &T,
    lists: &LeafLists,
    events: &[EulerEvent],
) -> Result<MarkResult> {
    sweep(tree, lists, events, Algorithm::Optimal, &mut |_, _| {})
}

/// Runs the selected procedure. `events` is ignored by the per-leaf scan.
pub fn mark<T: PrefixTree + ?Sized>(
    tree: &T,
    lists: &LeafLists,
    events: &[EulerEvent],
    algorithm: Algorithm,
) -> Result<MarkResult> {
    match algorithm {
        Algorithm::PerLeaf => Ok(mark_all_per_leaf(tree, lists)),
        Algorithm::Quadratic => mark_all_quadratic(tree, lists, events),
        Algorithm::Optimal => mark_all_optimal(tree, lists, events),
    }
}

/// A stack sweep that hands the state to `observer` before each event.
/// `algorithm` must be `Quadratic` or `Optimal`.
pub fn mark_observed<T: PrefixTree + ?Sized>(
    tree: &T,
    lists: &LeafLists,
    events: &[EulerEvent],
    algorithm: Algorithm,
    observer: &mut dyn FnMut(&EulerEvent, &MarkState),
) -> Result<MarkResult> {
    if algorithm == Algorithm::PerLeaf {
        return Err(HogError::Invariant(
            "the per-leaf procedure does not sweep Euler events".into(),
        ));
    }
    sweep(tree, lists, events, algorithm, observer)
}

fn sweep<T: PrefixTree + ?Sized>(
    tree: &T,
    lists: &LeafLists,
    events: &[EulerEvent],
    algorithm: Algorithm,
    observer: &mut dyn FnMut(&EulerEvent, &MarkState),
) -> Result<MarkResult> {
    let optimal = algorithm == Algorithm::Optimal;
    let mut st = MarkState::new(tree);
    for event in events {
        observer(event, &st);
        st.op_counter += 1;
        let v = event.node;
        match event.kind {
            EulerKind::FirstVisit => {
                for &x in lists.get(v) {
                    let x = x as usize;
                    st.push(x, v);
                    if optimal {
                        st.enqueue(x);
                    }
                }
            }
            EulerKind::LastVisit => {
                for &x in lists.get(v) {
                    let x = x as usize;
                    st.pop(x, v)?;
                    if optimal {
                        if let Some(&top) = st.stacks[x].last() {
                            if !st.in_hog[top.index()] {
                                st.enqueue(x);
                            }
                        }
                    }
                }
            }
            EulerKind::LeafVisit if optimal => {
                let pending = std::mem::take(&mut st.pending);
                for &x in &pending {
                    let x = x as usize;
                    st.in_pending[x] = false;
                    st.op_counter += 1;
                    // A stack queued by a pop may have been emptied by a
                    // later pop before reaching a leaf.
                    if let Some(&top) = st.stacks[x].last() {
                        st.mark(top);
                    }
                }
                st.pending = pending;
                st.pending.clear();
            }
            EulerKind::LeafVisit => {
                for x in 0..st.stacks.len() {
                    st.op_counter += 1;
                    if let Some(&top) = st.stacks[x].last() {
                        st.mark(top);
                    }
                }
            }
        }
    }
    Ok(st.finish(algorithm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leaf_lists::compute_leaf_lists;
    use crate::pattern_set::PatternSet;
    use crate::tree::euler_traversal;
    use crate::trie::AcTrie;

    struct Fixture {
        trie: AcTrie,
        lists: LeafLists,
        events: Vec<EulerEvent>,
    }

    fn fixture<S: AsRef<[u8]>>(p: &[S]) -> Fixture {
        let trie = AcTrie::build(PatternSet::strict(p).unwrap());
        let lists = compute_leaf_lists(&trie).unwrap();
        let events = euler_traversal(&trie);
        Fixture {
            trie,
            lists,
            events,
        }
    }

    fn names(t: &AcTrie, nodes: impl IntoIterator<Item = NodeId>) -> Vec<String> {
        let mut v: Vec<String> = nodes
            .into_iter()
            .map(|n| String::from_utf8(t.node_bytes(n).to_vec()).unwrap())
            .collect();
        v.sort();
        v
    }

    fn marked(f: &Fixture, algorithm: Algorithm) -> Vec<String> {
        let r = mark(&f.trie, &f.lists, &f.events, algorithm).unwrap();
        names(&f.trie, r.marked_internal(&f.trie))
    }

    #[test]
    fn single_leaf_three_strings() {
        let f = fixture(&["aabaa", "aadbd", "dbdaa"]);
        let leaf = |s: &str| f.trie.find(s.as_bytes()).unwrap();
        let got = mark_single_leaf(&f.trie, &f.lists, leaf("dbdaa"));
        assert_eq!(names(&f.trie, got), ["dbd"]);
        let got = mark_single_leaf(&f.trie, &f.lists, leaf("aabaa"));
        assert_eq!(names(&f.trie, got), ["aa"]);
        let got = mark_single_leaf(&f.trie, &f.lists, leaf("aadbd"));
        assert_eq!(names(&f.trie, got), ["aa"]);
    }

    #[test]
    fn single_leaf_without_overlaps() {
        let f = fixture(&["ab", "cd"]);
        let cd = f.trie.find(b"cd").unwrap();
        assert!(mark_single_leaf(&f.trie, &f.lists, cd).is_empty());
    }

    #[test]
    fn three_strings_all_variants() {
        let f = fixture(&["aabaa", "aadbd", "dbdaa"]);
        for algorithm in Algorithm::ALL {
            assert_eq!(marked(&f, algorithm), ["aa", "dbd"], "{algorithm}");
        }
    }

    #[test]
    fn no_self_overlap() {
        let f = fixture(&["ab"]);
        for algorithm in Algorithm::ALL {
            assert!(marked(&f, algorithm).is_empty());
        }
    }

    #[test]
    fn self_border_is_marked() {
        let f = fixture(&["aa"]);
        for algorithm in Algorithm::ALL {
            assert_eq!(marked(&f, algorithm), ["a"]);
        }
    }

    #[test]
    fn staircase_family_separates_variants() {
        // a b^i a: every ordered pair overlaps on "a" only
        let p: Vec<String> = (1..=200).map(|i| format!("a{}a", "b".repeat(i))).collect();
        let f = fixture(&p);
        let quad = mark_all_quadratic(&f.trie, &f.lists, &f.events).unwrap();
        let opt = mark_all_optimal(&f.trie, &f.lists, &f.events).unwrap();
        assert_eq!(quad.in_hog, opt.in_hog);
        assert_eq!(names(&f.trie, opt.marked_internal(&f.trie)), ["a"]);
        assert!(
            quad.op_counter > 10 * opt.op_counter,
            "quadratic {} vs optimal {}",
            quad.op_counter,
            opt.op_counter
        );
    }

    #[test]
    fn stacks_track_open_ancestors() {
        let f = fixture(&["aabaa", "aadbd", "dbdaa", "baab", "abba"]);
        let n = f.trie.patterns().len();
        for algorithm in [Algorithm::Quadratic, Algorithm::Optimal] {
            let mut open: Vec<NodeId> = Vec::new();
            let mut since_leaf = vec![0u32; n];
            let mut marks_seen = 0;
            let r = mark_observed(&f.trie, &f.lists, &f.events, algorithm, &mut |ev, st| {
                for x in 0..n {
                    let want: Vec<NodeId> = open
                        .iter()
                        .copied()
                        .filter(|&v| f.lists.get(v).contains(&(x as u32)))
                        .collect();
                    assert_eq!(st.stack(x), want.as_slice());
                    assert_eq!(st.is_pending(x), st.pending().contains(&(x as u32)));
                }
                let mut sorted = st.pending().to_vec();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), st.pending().len());
                match ev.kind {
                    EulerKind::FirstVisit => open.push(ev.node),
                    EulerKind::LastVisit => assert_eq!(open.pop(), Some(ev.node)),
                    EulerKind::LeafVisit if algorithm == Algorithm::Optimal => {
                        for &x in st.pending() {
                            since_leaf[x as usize] += 1;
                            assert_eq!(since_leaf[x as usize], 1);
                        }
                        since_leaf.iter_mut().for_each(|c| *c = 0);
                    }
                    EulerKind::LeafVisit => {}
                }
                marks_seen = st.marks();
            })
            .unwrap();
            assert!(r.marks >= marks_seen);
            if algorithm == Algorithm::Optimal {
                assert!(r.marks as usize <= f.lists.total_entries());
            }
        }
    }

    #[test]
    fn pop_mismatch_is_reported() {
        let f = fixture(&["aabaa", "aadbd", "dbdaa"]);
        let a = f.trie.find(b"a").unwrap();
        let aa = f.trie.find(b"aa").unwrap();
        // close "a" before its child "aa"
        let mut events = f.events.clone();
        let ia = events
            .iter()
            .position(|e| e.kind == EulerKind::LastVisit && e.node == a)
            .unwrap();
        let iaa = events
            .iter()
            .position(|e| e.kind == EulerKind::LastVisit && e.node == aa)
            .unwrap();
        events.swap(ia, iaa);
        for algorithm in [Algorithm::Quadratic, Algorithm::Optimal] {
            let err = mark(&f.trie, &f.lists, &events, algorithm).unwrap_err();
            assert!(
                matches!(err, HogError::PopMismatch { expected, found: Some(found), .. }
                    if expected == a.index() && found == aa.index()),
                "{err}"
            );
        }
    }

    #[test]
    fn per_leaf_rejected_by_observer_entry_point() {
        let f = fixture(&["ab"]);
        assert!(mark_observed(
            &f.trie,
            &f.lists,
            &f.events,
            Algorithm::PerLeaf,
            &mut |_, _| {}
        )
        .is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("fast".parse::<Algorithm>().is_err());
    }
}
