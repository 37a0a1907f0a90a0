//! Per-node lists of the patterns that end with the node's string.

use crate::error::{HogError, Result};
use crate::tree::{NodeId, PrefixTree};

/// For each internal node `v`, the patterns `x` such that `v` is a proper
/// suffix of `x`. Stored as one flat pool sliced per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafLists {
    offsets: Vec<u32>,
    entries: Vec<u32>,
}

impl LeafLists {
    pub fn get(&self, v: NodeId) -> &[u32] {
        &self.entries[self.offsets[v.index()] as usize..self.offsets[v.index() + 1] as usize]
    }

    pub fn total_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Walks the suffix path of every leaf, in pattern order, appending the
/// leaf's pattern to each node met before the root.
///
/// Fails if a suffix path reaches another leaf, which can only happen when
/// the pattern set is not factor-free.
pub fn compute_leaf_lists<T: PrefixTree + ?Sized>(tree: &T) -> Result<LeafLists> {
    let n = tree.node_count();
    let leaves = tree.patterns().len();

    let mut counts = vec![0u32; n + 1];
    for x in 0..leaves {
        let mut y = tree.suffix_link(tree.leaf_of(x));
        while !y.is_root() {
            if tree.is_leaf(y) {
                return Err(HogError::Invariant(format!(
                    "suffix path of pattern #{x} reaches leaf {y}; patterns are not factor-free"
                )));
            }
            counts[y.index() + 1] += 1;
            y = tree.suffix_link(y);
        }
    }
    for i in 1..=n {
        counts[i] += counts[i - 1];
    }
    let offsets = counts;

    let mut fill = offsets[..n].to_vec();
    let mut entries = vec![0u32; offsets[n] as usize];
    for x in 0..leaves {
        let mut y = tree.suffix_link(tree.leaf_of(x));
        while !y.is_root() {
            let slot = &mut fill[y.index()];
            entries[*slot as usize] = x as u32;
            *slot += 1;
            y = tree.suffix_link(y);
        }
    }
    Ok(LeafLists { offsets, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern_set::PatternSet;
    use crate::trie::AcTrie;

    fn lists_by_name(p: &[&str]) -> Vec<(String, Vec<String>)> {
        let t = AcTrie::build(PatternSet::strict(p).unwrap());
        let lists = compute_leaf_lists(&t).unwrap();
        assert!(lists.total_entries() <= t.patterns().total_length() - t.patterns().len());
        let mut out = Vec::new();
        for i in 0..t.node_count() {
            let v = NodeId::new(i);
            let l = lists.get(v);
            if !l.is_empty() {
                assert!(t.is_internal(v));
                let who = l
                    .iter()
                    .map(|&x| String::from_utf8(t.patterns()[x as usize].to_vec()).unwrap())
                    .collect();
                out.push((String::from_utf8(t.node_bytes(v).to_vec()).unwrap(), who));
            }
        }
        out.sort();
        out
    }

    fn owned(v: &[(&str, &[&str])]) -> Vec<(String, Vec<String>)> {
        v.iter()
            .map(|(k, l)| (k.to_string(), l.iter().map(|s| s.to_string()).collect()))
            .collect()
    }

    #[test]
    fn three_strings_lists() {
        assert_eq!(
            lists_by_name(&["aabaa", "aadbd", "dbdaa"]),
            owned(&[
                ("a", &["aabaa", "dbdaa"]),
                ("aa", &["aabaa", "dbdaa"]),
                ("d", &["aadbd"]),
                ("dbd", &["aadbd"]),
            ])
        );
    }

    #[test]
    fn no_overlaps_no_entries() {
        assert!(lists_by_name(&["ab", "cd"]).is_empty());
    }

    #[test]
    fn self_border() {
        assert_eq!(lists_by_name(&["aa"]), owned(&[("a", &["aa"])]));
    }
}
