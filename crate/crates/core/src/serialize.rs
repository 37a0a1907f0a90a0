//! JSON and DOT renderings of an [`OverlapGraph`].
//!
//! Edge labels are written as text. Printable ASCII is copied as is, a
//! backslash becomes `\\`, and every other byte becomes `\xNN`, so arbitrary
//! byte patterns survive a round trip.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HogError, Result};
use crate::graph::{GraphKind, OverlapGraph};
use crate::tree::{NodeId, PrefixTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    pub string_len: usize,
    pub is_leaf: bool,
    pub pattern: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDoc {
    pub from: usize,
    pub to: usize,
}

/// Plain-data form of a graph. Ids are breadth-first with children in
/// lexicographic order, so two graphs over the same patterns are isomorphic
/// exactly when their documents are equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub kind: GraphKind,
    pub nodes: Vec<NodeDoc>,
    pub tree_edges: Vec<EdgeDoc>,
    pub suffix_links: Vec<LinkDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Dot,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(OutputFormat::Dot),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!(
                "unknown output format `{other}` (expected dot|json)"
            )),
        }
    }
}

impl GraphDoc {
    pub fn from_graph(g: &OverlapGraph) -> Self {
        let ps = g.patterns();
        let all = || (0..g.node_count()).map(NodeId::new);
        let nodes = all()
            .map(|v| NodeDoc {
                id: v.index(),
                string_len: g.depth(v),
                is_leaf: g.is_leaf(v),
                pattern: g.pattern(v),
            })
            .collect();
        let tree_edges = all()
            .filter_map(|v| {
                let parent = g.parent(v)?;
                let label = g.label(v)?;
                Some(EdgeDoc {
                    from: parent.index(),
                    to: v.index(),
                    label: escape_label(label.bytes(ps)),
                })
            })
            .collect();
        let suffix_links = all()
            .skip(1)
            .map(|v| LinkDoc {
                from: v.index(),
                to: g.suffix_link(v).index(),
            })
            .collect();
        GraphDoc {
            kind: g.kind(),
            nodes,
            tree_edges,
            suffix_links,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| HogError::Document(e.to_string()))?;
        doc.check_shape()?;
        Ok(doc)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.nodes.len();
        let bad = |what: String| Err(HogError::Document(what));
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return bad(format!("node at position {i} has id {}", node.id));
            }
        }
        for e in &self.tree_edges {
            if e.from >= n || e.to >= n {
                return bad(format!("tree edge {} -> {} out of range", e.from, e.to));
            }
            unescape_label(&e.label)?;
        }
        for l in &self.suffix_links {
            if l.from >= n || l.to >= n {
                return bad(format!("suffix link {} -> {} out of range", l.from, l.to));
            }
        }
        Ok(())
    }

    /// Node strings spelled by concatenating labels from the root. `None`
    /// for nodes not reachable from node 0 through tree edges.
    pub fn spell_nodes(&self) -> Vec<Option<Vec<u8>>> {
        let n = self.nodes.len();
        let mut incoming: Vec<Option<(usize, Vec<u8>)>> = vec![None; n];
        for e in &self.tree_edges {
            if let Ok(label) = unescape_label(&e.label) {
                incoming[e.to] = Some((e.from, label));
            }
        }
        let mut spelled: Vec<Option<Vec<u8>>> = vec![None; n];
        if n == 0 {
            return spelled;
        }
        spelled[0] = Some(Vec::new());
        // 0 = unseen, 1 = on the current walk, 2 = settled
        let mut state = vec![0u8; n];
        state[0] = 2;
        let mut path = Vec::new();
        for start in 1..n {
            path.clear();
            let mut cur = start;
            while state[cur] == 0 {
                state[cur] = 1;
                path.push(cur);
                match &incoming[cur] {
                    Some((p, _)) => cur = *p,
                    None => break,
                }
            }
            for &v in path.iter().rev() {
                if let Some((p, label)) = &incoming[v] {
                    if let Some(prefix) = &spelled[*p] {
                        let mut s = prefix.clone();
                        s.extend_from_slice(label);
                        spelled[v] = Some(s);
                    }
                }
                state[v] = 2;
            }
        }
        spelled
    }

    pub fn to_dot(&self) -> String {
        let spelled = self.spell_nodes();
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", self.kind);
        let _ = writeln!(out, "  node [shape=ellipse];");
        for node in &self.nodes {
            let text = match &spelled[node.id] {
                Some(s) if s.is_empty() => "ε".to_string(),
                Some(s) => escape_label(s),
                None => "?".to_string(),
            };
            let shape = if node.is_leaf { ", shape=box" } else { "" };
            let _ = writeln!(
                out,
                "  n{} [label=\"{}\"{}];",
                node.id,
                dot_quote(&text),
                shape
            );
        }
        for e in &self.tree_edges {
            let _ = writeln!(
                out,
                "  n{} -> n{} [label=\"{}\"];",
                e.from,
                e.to,
                dot_quote(&e.label)
            );
        }
        for l in &self.suffix_links {
            let _ = writeln!(
                out,
                "  n{} -> n{} [style=dashed, color=gray, constraint=false];",
                l.from, l.to
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Serializes `g` in the requested format.
pub fn serialize(g: &OverlapGraph, format: OutputFormat) -> String {
    let doc = GraphDoc::from_graph(g);
    match format {
        OutputFormat::Json => doc.to_json(),
        OutputFormat::Dot => doc.to_dot(),
    }
}

pub fn escape_label(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len());
    for &b in bytes {
        match b {
            b'\\' => s.push_str("\\\\"),
            0x20..=0x7e => s.push(b as char),
            _ => {
                let _ = write!(s, "\\x{b:02x}");
            }
        }
    }
    s
}

pub fn unescape_label(text: &str) -> Result<Vec<u8>> {
    let bytes = text.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'\\' {
            out.push(bytes[i]);
            i += 1;
            continue;
        }
        match bytes.get(i + 1) {
            Some(b'\\') => {
                out.push(b'\\');
                i += 2;
            }
            Some(b'x') => {
                let hex = text
                    .get(i + 2..i + 4)
                    .and_then(|h| u8::from_str_radix(h, 16).ok())
                    .ok_or_else(|| HogError::Document(format!("bad escape in label `{text}`")))?;
                out.push(hex);
                i += 4;
            }
            _ => return Err(HogError::Document(format!("bad escape in label `{text}`"))),
        }
    }
    Ok(out)
}

fn dot_quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
