pub mod bench;
pub mod error;
pub mod gen;
pub mod graph;
pub mod leaf_lists;
pub mod mark;
pub mod oracle;
pub mod pattern_set;
pub mod pipeline;
pub mod serialize;
pub mod tree;
pub mod trie;

pub use error::{ErrorClass, HogError, Result};
pub use graph::{build_ehog, contract, trie_graph, GraphKind, LabelSlice, OverlapGraph};
pub use leaf_lists::{compute_leaf_lists, LeafLists};
pub use mark::{Algorithm, MarkResult, MarkState};
pub use pattern_set::{load_patterns, validate, InputFormat, PatternSet, Policy, Validated};
pub use pipeline::{build_graph, build_hog, build_hog_via_ehog, BuildOptions, Built, HogBuild};
pub use serialize::{serialize, GraphDoc, OutputFormat};
pub use tree::{euler_traversal, EulerEvent, EulerKind, NodeId, PrefixTree};
pub use trie::AcTrie;
