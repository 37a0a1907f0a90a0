//! End-to-end construction: leaf lists, Euler events, marking, contraction.

use crate::error::Result;
use crate::graph::{build_ehog, contract, trie_graph, GraphKind, OverlapGraph, SharedPatterns};
use crate::leaf_lists::compute_leaf_lists;
use crate::mark::{mark, Algorithm, MarkResult};
use crate::tree::{euler_traversal, PrefixTree};
use crate::trie::AcTrie;

/// A HOG together with what it cost to mark it.
#[derive(Debug, Clone)]
pub struct HogBuild {
    pub graph: OverlapGraph,
    pub mark: MarkResult,
    /// Node count of the structure that was marked.
    pub base_nodes: usize,
    pub list_entries: usize,
}

/// Marks `base` with `algorithm` and contracts it into the HOG. `base` may
/// be the trie or an EHOG.
pub fn build_hog<T>(base: &T, algorithm: Algorithm) -> Result<HogBuild>
where
    T: PrefixTree + SharedPatterns + ?Sized,
{
    let lists = compute_leaf_lists(base)?;
    let events = match algorithm {
        Algorithm::PerLeaf => Vec::new(),
        _ => euler_traversal(base),
    };
    let marked = mark(base, &lists, &events, algorithm)?;
    let graph = contract(base, &marked.in_hog, GraphKind::Hog)?;
    Ok(HogBuild {
        graph,
        mark: marked,
        base_nodes: base.node_count(),
        list_entries: lists.total_entries(),
    })
}

/// Builds the EHOG first and runs marking on it instead of on the trie.
pub fn build_hog_via_ehog(trie: &AcTrie, algorithm: Algorithm) -> Result<HogBuild> {
    let ehog = build_ehog(trie)?;
    build_hog(&ehog, algorithm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub kind: GraphKind,
    pub algorithm: Algorithm,
    pub via_ehog: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            kind: GraphKind::Hog,
            algorithm: Algorithm::Optimal,
            via_ehog: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Built {
    pub graph: OverlapGraph,
    /// Marking outcome, present for HOGs.
    pub mark: Option<MarkResult>,
    /// Leaf-list size of the marked structure, present for HOGs.
    pub list_entries: Option<usize>,
}

/// Builds the requested graph kind from the trie.
pub fn build_graph(trie: &AcTrie, options: BuildOptions) -> Result<Built> {
    let plain = |graph| Built {
        graph,
        mark: None,
        list_entries: None,
    };
    match options.kind {
        GraphKind::Trie => Ok(plain(trie_graph(trie)?)),
        GraphKind::Ehog => Ok(plain(build_ehog(trie)?)),
        GraphKind::Hog => {
            let hog = if options.via_ehog {
                build_hog_via_ehog(trie, options.algorithm)?
            } else {
                build_hog(trie, options.algorithm)?
            };
            Ok(Built {
                graph: hog.graph,
                mark: Some(hog.mark),
                list_entries: Some(hog.list_entries),
            })
        }
    }
}
