//! Instrumented benchmarks of the marking phase.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;
use std::thread;
use std::time::Instant;

use crate::error::Result;
use crate::gen::{dense_family, random_reads, GenRng, SeedableRng};
use crate::leaf_lists::compute_leaf_lists;
use crate::mark::{mark, Algorithm};
use crate::pattern_set::{validate, PatternSet, Policy};
use crate::tree::{euler_traversal, PrefixTree};
use crate::trie::AcTrie;

/// One marking run. Only the marking phase is timed and counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub total_length: usize,
    pub wall_time_ns: u128,
    pub op_counter: u64,
    pub node_count: usize,
    pub list_entries: usize,
    pub peak_stack_entries: usize,
}

pub const CSV_HEADER: &str = "algo,n,total_length,wall_time_ns,op_counter,node_count,list_entries";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.algorithm,
            self.n,
            self.total_length,
            self.wall_time_ns,
            self.op_counter,
            self.node_count,
            self.list_entries
        )
    }

    /// Peak working-set size in units: trie nodes, list entries and stack
    /// entries held at once.
    pub fn memory_units(&self) -> usize {
        self.node_count + self.list_entries + self.peak_stack_entries
    }
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Builds trie, lists and events once, then times each algorithm's marking.
pub fn bench_patterns(ps: Arc<PatternSet>, algorithms: &[Algorithm]) -> Result<Vec<BenchRecord>> {
    let trie = AcTrie::build(Arc::clone(&ps));
    let lists = compute_leaf_lists(&trie)?;
    let events = euler_traversal(&trie);
    let mut out = Vec::with_capacity(algorithms.len());
    for &algorithm in algorithms {
        let started = Instant::now();
        let result = mark(&trie, &lists, &events, algorithm)?;
        let wall_time_ns = started.elapsed().as_nanos();
        out.push(BenchRecord {
            algorithm,
            n: ps.len(),
            total_length: ps.total_length(),
            wall_time_ns,
            op_counter: result.op_counter,
            node_count: trie.node_count(),
            list_entries: lists.total_entries(),
            peak_stack_entries: result.peak_stack_entries,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Uniform random reads.
    Random,
    /// Strings sharing long common borders; see [`dense_family`].
    Dense,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Family::Random),
            "dense" => Ok(Family::Dense),
            other => Err(format!("unknown family `{other}` (expected random|dense)")),
        }
    }
}

/// A benchmark size: `n` strings of `read_len` bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Size {
    pub n: usize,
    pub read_len: usize,
}

impl FromStr for Size {
    type Err = String;

    /// Parses `NxLEN`, e.g. `1000x100`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, len) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("size `{s}` is not of the form NxLEN"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|e| format!("size `{s}`: {e}"))
        };
        let size = Size {
            n: parse(n)?,
            read_len: parse(len)?,
        };
        if size.n == 0 || size.read_len == 0 {
            return Err(format!("size `{s}` must be positive"));
        }
        Ok(size)
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<Size>,
    pub algorithms: Vec<Algorithm>,
    pub family: Family,
    pub sigma: usize,
    pub seed: u64,
    pub reps: usize,
    pub jobs: usize,
}

/// Generates one validated instance. Each (size, repetition) pair gets its
/// own stream derived from the base seed.
pub fn instance(config: &BenchConfig, size: Size, rep: usize) -> Result<PatternSet> {
    let stream =
        config.seed ^ ((size.n as u64) << 32) ^ ((size.read_len as u64) << 16) ^ rep as u64;
    let mut rng = GenRng::seed_from_u64(stream);
    let raw = match config.family {
        Family::Random => random_reads(&mut rng, size.n, size.read_len, config.sigma),
        Family::Dense => dense_family(&mut rng, size.n, size.read_len, config.sigma),
    };
    Ok(validate(raw, Policy::DropContained)?.set)
}

/// Runs every (size, repetition) pipeline, `jobs` at a time, and returns the
/// records in (size, repetition, algorithm) order.
pub fn run(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let tasks: Vec<(Size, usize)> = config
        .sizes
        .iter()
        .flat_map(|&s| (0..config.reps.max(1)).map(move |r| (s, r)))
        .collect();
    let jobs = config.jobs.max(1);
    let mut slots: Vec<Option<Result<Vec<BenchRecord>>>> = (0..tasks.len()).map(|_| None).collect();
    for (chunk_tasks, chunk_slots) in tasks.chunks(jobs).zip(slots.chunks_mut(jobs)) {
        thread::scope(|scope| {
            let handles: Vec<_> = chunk_tasks
                .iter()
                .map(|&(size, rep)| {
                    scope.spawn(move || {
                        let ps = instance(config, size, rep)?;
                        bench_patterns(Arc::new(ps), &config.algorithms)
                    })
                })
                .collect();
            for (slot, h) in chunk_slots.iter_mut().zip(handles) {
                *slot = Some(h.join().expect("benchmark worker panicked"));
            }
        });
    }
    let mut out = Vec::new();
    for slot in slots {
        out.extend(slot.expect("every task ran")?);
    }
    Ok(out)
}

/// Least-squares slope of `ln y` against `ln x`. `None` with fewer than two
/// distinct x values.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// `op_counter` vs `total_length` slope per algorithm, in the order the
/// algorithms first appear.
pub fn slopes(records: &[BenchRecord]) -> Vec<(Algorithm, Option<f64>)> {
    let mut algos: Vec<Algorithm> = Vec::new();
    for r in records {
        if !algos.contains(&r.algorithm) {
            algos.push(r.algorithm);
        }
    }
    algos
        .into_iter()
        .map(|a| {
            let pts: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| r.algorithm == a)
                .map(|r| (r.total_length as f64, r.op_counter as f64))
                .collect();
            (a, log_log_slope(&pts))
        })
        .collect()
}

pub fn render_slopes(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    for (a, slope) in slopes(records) {
        match slope {
            Some(s) => {
                let _ = writeln!(out, "slope {a}: {s:.3}");
            }
            None => {
                let _ = writeln!(out, "slope {a}: n/a (need two or more sizes)");
            }
        }
    }
    out
}
