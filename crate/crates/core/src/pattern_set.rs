//! Input patterns: loading from line-oriented or FASTA streams and
//! validation into a factor-free [`PatternSet`].

use std::collections::HashMap;
use std::io::Read;
use std::ops::Index;
use std::str::FromStr;

use aho_corasick::{AhoCorasick, AhoCorasickKind};

use crate::error::{HogError, Result};

/// Accepted input layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One pattern per line, empty lines skipped.
    Lines,
    /// `>` headers followed by sequence lines that are concatenated.
    Fasta,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lines" => Ok(InputFormat::Lines),
            "fasta" => Ok(InputFormat::Fasta),
            other => Err(format!(
                "unknown input format `{other}` (expected lines|fasta)"
            )),
        }
    }
}

/// What to do with duplicated or contained patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Reject the input on the first violation.
    #[default]
    Strict,
    /// Keep only maximal strings and report everything dropped.
    DropContained,
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Policy::Strict),
            "drop-contained" | "drop_contained" => Ok(Policy::DropContained),
            other => Err(format!(
                "unknown policy `{other}` (expected strict|drop-contained)"
            )),
        }
    }
}

/// Reads raw patterns from `source`. When `format` is `None` the layout is
/// inferred: a leading `>` selects FASTA, anything else is line-oriented.
///
/// An empty stream yields an empty list; [`validate`] rejects it later.
pub fn load_patterns<R: Read>(mut source: R, format: Option<InputFormat>) -> Result<Vec<Vec<u8>>> {
    let mut buf = Vec::new();
    source.read_to_end(&mut buf)?;
    let format = format.unwrap_or(if buf.first() == Some(&b'>') {
        InputFormat::Fasta
    } else {
        InputFormat::Lines
    });
    match format {
        InputFormat::Lines => Ok(split_lines(&buf)
            .filter(|line| !line.is_empty())
            .map(<[u8]>::to_vec)
            .collect()),
        InputFormat::Fasta => parse_fasta(&buf),
    }
}

// A trailing '\r' is treated as part of a CRLF line ending.
fn split_lines(buf: &[u8]) -> impl Iterator<Item = &[u8]> {
    buf.split(|&b| b == b'\n')
        .map(|line| line.strip_suffix(b"\r").unwrap_or(line))
}

fn parse_fasta(buf: &[u8]) -> Result<Vec<Vec<u8>>> {
    let mut records: Vec<Vec<u8>> = Vec::new();
    let mut header: Option<String> = None;
    for (lineno, line) in split_lines(buf).enumerate() {
        if let Some(name) = line.strip_prefix(b">") {
            if let Some(prev) = header.take() {
                if records.last().is_some_and(Vec::is_empty) {
                    return Err(HogError::EmptyFastaRecord { header: prev });
                }
            }
            header = Some(String::from_utf8_lossy(name).trim().to_string());
            records.push(Vec::new());
        } else if !line.is_empty() {
            match records.last_mut() {
                Some(seq) if header.is_some() => seq.extend_from_slice(line),
                _ => {
                    return Err(HogError::Format {
                        line: lineno + 1,
                        reason: "sequence data before the first FASTA header".into(),
                    })
                }
            }
        }
    }
    if let Some(prev) = header {
        if records.last().is_some_and(Vec::is_empty) {
            return Err(HogError::EmptyFastaRecord { header: prev });
        }
    }
    Ok(records)
}

/// Why a pattern was removed under [`Policy::DropContained`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DropReason {
    /// Byte-identical to the earlier pattern at this input index.
    Duplicate(usize),
    /// Occurs inside the pattern at this input index.
    ContainedIn(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dropped {
    /// Position in the raw input list.
    pub index: usize,
    pub pattern: Vec<u8>,
    pub reason: DropReason,
}

/// A validated pattern set together with what validation removed.
#[derive(Debug, Clone)]
pub struct Validated {
    pub set: PatternSet,
    pub dropped: Vec<Dropped>,
}

/// A non-empty, duplicate-free, factor-free list of non-empty byte strings.
///
/// Factor-freeness guarantees every pattern is a leaf of the Aho-Corasick
/// trie, which the marking algorithms rely on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<Vec<u8>>,
    total_length: usize,
}

impl PatternSet {
    /// Validates `raw` under [`Policy::Strict`].
    pub fn strict<I, S>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let raw = raw.into_iter().map(|s| s.as_ref().to_vec()).collect();
        validate(raw, Policy::Strict).map(|v| v.set)
    }

    /// Number of patterns.
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    /// Always false for a validated set; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Sum of all pattern lengths.
    pub fn total_length(&self) -> usize {
        self.total_length
    }

    pub fn get(&self, index: usize) -> &[u8] {
        &self.patterns[index]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> {
        self.patterns.iter().map(Vec::as_slice)
    }

    pub fn max_len(&self) -> usize {
        self.patterns.iter().map(Vec::len).max().unwrap_or(0)
    }
}

impl Index<usize> for PatternSet {
    type Output = [u8];

    fn index(&self, index: usize) -> &[u8] {
        &self.patterns[index]
    }
}

/// Checks the raw list against the pattern-set invariants.
///
/// Substring containment is detected by scanning every pattern with an
/// Aho-Corasick automaton over the distinct patterns. The scan costs
/// `O(||P|| + occurrences)`, where `occurrences` is the number of positions
/// at which one pattern ends inside another.
pub fn validate(raw: Vec<Vec<u8>>, policy: Policy) -> Result<Validated> {
    if let Some(index) = raw.iter().position(Vec::is_empty) {
        return Err(HogError::EmptyPattern { index });
    }

    let mut dropped = Vec::new();
    let mut first_seen: HashMap<&[u8], usize> = HashMap::with_capacity(raw.len());
    // Input indices of the first occurrence of each distinct pattern.
    let mut distinct: Vec<usize> = Vec::with_capacity(raw.len());
    for (index, pattern) in raw.iter().enumerate() {
        match first_seen.get(pattern.as_slice()) {
            Some(&first) => match policy {
                Policy::Strict => return Err(HogError::DuplicatePattern { index, first }),
                Policy::DropContained => dropped.push(Dropped {
                    index,
                    pattern: pattern.clone(),
                    reason: DropReason::Duplicate(first),
                }),
            },
            None => {
                first_seen.insert(pattern, index);
                distinct.push(index);
            }
        }
    }
    drop(first_seen);

    let container = find_containers(&raw, &distinct)?;
    let mut keep = vec![false; raw.len()];
    for (slot, &index) in distinct.iter().enumerate() {
        match container[slot] {
            Some(outer) => match policy {
                Policy::Strict => {
                    return Err(HogError::ContainedPattern {
                        index,
                        container: outer,
                    })
                }
                Policy::DropContained => dropped.push(Dropped {
                    index,
                    pattern: raw[index].clone(),
                    reason: DropReason::ContainedIn(outer),
                }),
            },
            None => keep[index] = true,
        }
    }
    dropped.sort_by_key(|d| d.index);

    let patterns: Vec<Vec<u8>> = raw
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    if patterns.is_empty() {
        return Err(HogError::EmptySet);
    }
    let total_length = patterns.iter().map(Vec::len).sum();
    Ok(Validated {
        set: PatternSet {
            patterns,
            total_length,
        },
        dropped,
    })
}

/// For each distinct pattern, the input index of some other pattern that
/// contains it. Containers are themselves chosen among maximal patterns so
/// that the report never points at a dropped string.
fn find_containers(raw: &[Vec<u8>], distinct: &[usize]) -> Result<Vec<Option<usize>>> {
    if distinct.is_empty() {
        return Ok(Vec::new());
    }
    // A DFA build is superlinear on long periodic patterns; the NFA is not.
    let automaton = AhoCorasick::builder()
        .kind(Some(AhoCorasickKind::ContiguousNFA))
        .build(distinct.iter().map(|&i| raw[i].as_slice()))
        .map_err(|e| HogError::Invariant(format!("containment automaton: {e}")))?;

    let mut container: Vec<Option<usize>> = vec![None; distinct.len()];
    for (outer_slot, &outer) in distinct.iter().enumerate() {
        let text = raw[outer].as_slice();
        for m in automaton.find_overlapping_iter(text) {
            let inner_slot = m.pattern().as_usize();
            if inner_slot != outer_slot && container[inner_slot].is_none() {
                container[inner_slot] = Some(outer_slot);
            }
        }
    }

    // Redirect to a maximal container. A container is strictly longer than
    // what it contains, so visiting by decreasing length resolves it first.
    let mut order: Vec<usize> = (0..distinct.len()).collect();
    order.sort_by_key(|&slot| std::cmp::Reverse(raw[distinct[slot]].len()));
    let mut maximal: Vec<usize> = (0..distinct.len()).collect();
    for slot in order {
        if let Some(outer) = container[slot] {
            maximal[slot] = maximal[outer];
        }
    }
    Ok(container
        .iter()
        .enumerate()
        .map(|(slot, c)| c.map(|_| distinct[maximal[slot]]))
        .collect())
}
