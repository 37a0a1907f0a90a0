//! Brute-force ground truth by direct string comparison, and a checker that
//! holds a serialized graph against it.
//!
//! Nothing here touches the trie, the leaf lists or the marking code.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{HogError, Result};
use crate::graph::GraphKind;
use crate::pattern_set::PatternSet;
use crate::serialize::{escape_label, unescape_label, GraphDoc};

/// Default cap on `||P||` for oracle verification.
pub const DEFAULT_SIZE_GUARD: usize = 100_000;

/// Environment variable overriding [`DEFAULT_SIZE_GUARD`].
pub const SIZE_GUARD_ENV: &str = "HOGKIT_SIZE_GUARD";

pub fn size_guard_from_env() -> usize {
    std::env::var(SIZE_GUARD_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_GUARD)
}

pub fn check_size_guard(ps: &PatternSet, guard: usize) -> Result<()> {
    if ps.total_length() > guard {
        return Err(HogError::SizeGuard {
            total_length: ps.total_length(),
            guard,
        });
    }
    Ok(())
}

/// Lengths `l` for which the last `l` bytes of `p` equal the first `l`
/// bytes of `q`, with `l` a proper length of both.
pub fn all_overlaps(p: &[u8], q: &[u8]) -> BTreeSet<usize> {
    let max = p.len().min(q.len()).saturating_sub(1);
    (1..=max).filter(|&l| p[p.len() - l..] == q[..l]).collect()
}

/// Length of the longest overlap of `(p, q)`, 0 when there is none.
pub fn longest_overlap(p: &[u8], q: &[u8]) -> usize {
    all_overlaps(p, q).last().copied().unwrap_or(0)
}

/// Overlap lengths for every ordered pair of patterns.
#[derive(Debug, Clone)]
pub struct OverlapTable {
    n: usize,
    all: Vec<BTreeSet<usize>>,
}

impl OverlapTable {
    pub fn build(ps: &PatternSet) -> Self {
        let n = ps.len();
        let mut all = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                all.push(all_overlaps(&ps[i], &ps[j]));
            }
        }
        OverlapTable { n, all }
    }

    pub fn overlaps(&self, i: usize, j: usize) -> &BTreeSet<usize> {
        &self.all[i * self.n + j]
    }

    pub fn longest(&self, i: usize, j: usize) -> usize {
        self.overlaps(i, j).last().copied().unwrap_or(0)
    }
}

fn with_patterns_and_root(ps: &PatternSet, mut set: BTreeSet<Vec<u8>>) -> BTreeSet<Vec<u8>> {
    set.insert(Vec::new());
    set.extend(ps.iter().map(<[u8]>::to_vec));
    set
}

/// `P ∪ {ov(p, q)} ∪ {ε}` over all ordered pairs, self pairs included.
pub fn hog_node_oracle(ps: &PatternSet) -> BTreeSet<Vec<u8>> {
    let mut set = BTreeSet::new();
    for q in ps.iter() {
        for p in ps.iter() {
            let l = longest_overlap(p, q);
            if l > 0 {
                set.insert(q[..l].to_vec());
            }
        }
    }
    with_patterns_and_root(ps, set)
}

/// `P ∪ {every overlap of every ordered pair} ∪ {ε}`.
pub fn ehog_node_oracle(ps: &PatternSet) -> BTreeSet<Vec<u8>> {
    let mut set = BTreeSet::new();
    for q in ps.iter() {
        for p in ps.iter() {
            for l in all_overlaps(p, q) {
                set.insert(q[..l].to_vec());
            }
        }
    }
    with_patterns_and_root(ps, set)
}

/// Every prefix of every pattern, ε included.
pub fn trie_node_oracle(ps: &PatternSet) -> BTreeSet<Vec<u8>> {
    let mut set = BTreeSet::new();
    for p in ps.iter() {
        for l in 0..=p.len() {
            set.insert(p[..l].to_vec());
        }
    }
    set
}

pub fn node_oracle(kind: GraphKind, ps: &PatternSet) -> BTreeSet<Vec<u8>> {
    match kind {
        GraphKind::Trie => trie_node_oracle(ps),
        GraphKind::Ehog => ehog_node_oracle(ps),
        GraphKind::Hog => hog_node_oracle(ps),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub label: String,
    pub kind: GraphKind,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Human-readable rendering, at most `max_failures` lines per check.
    pub fn render_text(&self, max_failures: usize) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {} {}", self.label, c.name);
            for f in c.failures.iter().take(max_failures) {
                let _ = writeln!(out, "    {f}");
            }
            if c.failures.len() > max_failures {
                let _ = writeln!(out, "    ... {} more", c.failures.len() - max_failures);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Compare the node set with the brute-force overlap oracle. Costs
    /// `O(n^2 L^2)`; the remaining checks are near-linear.
    pub node_set: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { node_set: true }
    }
}

fn show(s: &[u8]) -> String {
    if s.is_empty() {
        "ε".to_string()
    } else {
        escape_label(s)
    }
}

/// Full oracle verification of `doc` against `ps`.
pub fn verify_graph(doc: &GraphDoc, ps: &PatternSet) -> VerifyReport {
    verify_with(doc, ps, VerifyOptions::default(), doc.kind.as_str())
}

/// Verification with explicit options and a label naming the graph in the
/// report.
pub fn verify_with(
    doc: &GraphDoc,
    ps: &PatternSet,
    options: VerifyOptions,
    label: &str,
) -> VerifyReport {
    let n = doc.nodes.len();
    let mut checks = Vec::new();

    // structure: a tree rooted at node 0 with one suffix link per non-root
    let mut failures = Vec::new();
    let mut incoming: Vec<Option<(usize, Vec<u8>)>> = vec![None; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &doc.tree_edges {
        if e.from >= n || e.to >= n {
            failures.push(format!(
                "tree edge {} -> {} leaves the node range",
                e.from, e.to
            ));
            continue;
        }
        let label = match unescape_label(&e.label) {
            Ok(l) => l,
            Err(err) => {
                failures.push(format!("tree edge {} -> {}: {err}", e.from, e.to));
                continue;
            }
        };
        if label.is_empty() {
            failures.push(format!(
                "tree edge {} -> {} has an empty label",
                e.from, e.to
            ));
        }
        if e.to == 0 {
            failures.push("the root has a parent".to_string());
        } else if incoming[e.to].is_some() {
            failures.push(format!("node {} has several parents", e.to));
        } else {
            incoming[e.to] = Some((e.from, label));
            children[e.from].push(e.to);
        }
    }
    let mut spelled: Vec<Option<Vec<u8>>> = vec![None; n];
    if n == 0 {
        failures.push("graph has no nodes".to_string());
    } else {
        spelled[0] = Some(Vec::new());
        let mut queue = vec![0usize];
        while let Some(v) = queue.pop() {
            for &c in &children[v] {
                if spelled[c].is_some() {
                    continue;
                }
                let (_, label) = incoming[c].as_ref().unwrap();
                let mut s = spelled[v].clone().unwrap();
                s.extend_from_slice(label);
                spelled[c] = Some(s);
                queue.push(c);
            }
        }
    }
    for (v, s) in spelled.iter().enumerate().skip(1) {
        if s.is_none() {
            failures.push(format!("node {v} is not reachable from the root"));
        }
    }
    let mut link: Vec<Option<usize>> = vec![None; n];
    for l in &doc.suffix_links {
        if l.from >= n || l.to >= n {
            failures.push(format!(
                "suffix link {} -> {} leaves the node range",
                l.from, l.to
            ));
        } else if l.from == 0 {
            failures.push("the root has a suffix link".to_string());
        } else if link[l.from].replace(l.to).is_some() {
            failures.push(format!("node {} has several suffix links", l.from));
        }
    }
    for (v, l) in link.iter().enumerate().skip(1) {
        if l.is_none() {
            failures.push(format!("node {v} has no suffix link"));
        }
    }
    checks.push(Check {
        name: "structure",
        passed: failures.is_empty(),
        failures,
    });

    // spelling: lengths agree, leaves spell their patterns
    let mut failures = Vec::new();
    let mut leaf_for = vec![None; ps.len()];
    for node in &doc.nodes {
        let Some(s) = spelled.get(node.id).and_then(Option::as_ref) else {
            continue;
        };
        if s.len() != node.string_len {
            failures.push(format!(
                "node {} spells `{}` of length {}, recorded {}",
                node.id,
                show(s),
                s.len(),
                node.string_len
            ));
        }
        match (node.is_leaf, node.pattern) {
            (true, Some(x)) if x < ps.len() => {
                if s.as_slice() != &ps[x] {
                    failures.push(format!(
                        "leaf {} spells `{}` but pattern #{x} is `{}`",
                        node.id,
                        show(s),
                        show(&ps[x])
                    ));
                }
                if leaf_for[x].replace(node.id).is_some() {
                    failures.push(format!("pattern #{x} has several leaves"));
                }
                if !children[node.id].is_empty() {
                    failures.push(format!("leaf {} has children", node.id));
                }
            }
            (false, None) => {}
            (is_leaf, pattern) => failures.push(format!(
                "node {} has is_leaf={is_leaf} with pattern {pattern:?}",
                node.id
            )),
        }
    }
    for (x, leaf) in leaf_for.iter().enumerate() {
        if leaf.is_none() {
            failures.push(format!("pattern #{x} `{}` has no leaf", show(&ps[x])));
        }
    }
    checks.push(Check {
        name: "label_spelling",
        passed: failures.is_empty(),
        failures,
    });

    let strings: Vec<&[u8]> = spelled.iter().flatten().map(Vec::as_slice).collect();
    let mut index: HashMap<&[u8], usize> = HashMap::with_capacity(strings.len());
    let mut duplicates = Vec::new();
    for (v, s) in spelled.iter().enumerate() {
        if let Some(s) = s {
            if let Some(prev) = index.insert(s.as_slice(), v) {
                duplicates.push(format!("nodes {prev} and {v} both spell `{}`", show(s)));
            }
        }
    }

    if options.node_set {
        let mut failures = duplicates.clone();
        let want = node_oracle(doc.kind, ps);
        let have: BTreeSet<Vec<u8>> = strings.iter().map(|s| s.to_vec()).collect();
        for missing in want.difference(&have) {
            failures.push(format!("missing node `{}`", show(missing)));
        }
        for extra in have.difference(&want) {
            failures.push(format!("unexpected node `{}`", show(extra)));
        }
        checks.push(Check {
            name: "node_set",
            passed: failures.is_empty(),
            failures,
        });
    }

    // E1 and E2 against the node set as spelled
    let present: HashSet<&[u8]> = strings.iter().copied().collect();
    let mut lengths: Vec<usize> = strings.iter().map(|s| s.len()).collect();
    lengths.sort_unstable();
    lengths.dedup();
    // length of the longest proper prefix (or suffix) of `s` present in V
    let longest_below = |s: &[u8], prefix: bool| -> Option<usize> {
        let cut = lengths.partition_point(|&l| l < s.len());
        lengths[..cut].iter().rev().copied().find(|&l| {
            let part = if prefix { &s[..l] } else { &s[s.len() - l..] };
            present.contains(part)
        })
    };

    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    for v in 1..n {
        let Some(s) = spelled[v].as_deref() else {
            continue;
        };
        let want_parent = longest_below(s, true);
        if let Some((p, _)) = &incoming[v] {
            let got = spelled[*p].as_deref().map(<[u8]>::len);
            if got != want_parent {
                e1.push(format!(
                    "node `{}`: parent has length {:?}, longest proper prefix in V has length {:?}",
                    show(s),
                    got,
                    want_parent
                ));
            }
        }
        let want_link = longest_below(s, false);
        if let Some(t) = link[v] {
            let got = spelled[t].as_deref();
            let ok = match (got, want_link) {
                (Some(g), Some(l)) => g == &s[s.len() - l..],
                _ => false,
            };
            if !ok {
                e2.push(format!(
                    "node `{}`: suffix link to `{}`, expected `{}`",
                    show(s),
                    got.map(show).unwrap_or_else(|| "?".into()),
                    want_link
                        .map(|l| show(&s[s.len() - l..]))
                        .unwrap_or_else(|| "?".into())
                ));
            }
        }
    }
    checks.push(Check {
        name: "tree_edges",
        passed: e1.is_empty(),
        failures: e1,
    });
    checks.push(Check {
        name: "suffix_links",
        passed: e2.is_empty(),
        failures: e2,
    });

    VerifyReport {
        label: label.to_string(),
        kind: doc.kind,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
