use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hogkit::bench::{self, BenchConfig, Family, Size};
use hogkit::gen::{random_small_instance, GenRng, SeedableRng};
use hogkit::oracle::{self, VerifyReport};
use hogkit::{
    build_graph, build_hog, build_hog_via_ehog, load_patterns, validate, AcTrie, Algorithm,
    BuildOptions, ErrorClass, GraphDoc, GraphKind, HogError, InputFormat, PatternSet, Policy,
    PrefixTree,
};

/// Exit code for a verification run with failing checks.
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hogkit",
    version,
    about = "Build, verify and benchmark hierarchical overlap graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a trie, EHOG or HOG and write it to stdout.
    Build(BuildArgs),
    /// Check every construction route against the brute-force oracle.
    Verify(VerifyArgs),
    /// Time and count the marking phase on synthetic inputs.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Pattern file; reads stdin when omitted.
    #[arg(long, short)]
    input: Option<PathBuf>,

    /// Input format. Inferred from the first byte when omitted (`>` means FASTA).
    #[arg(long, value_parser = parse_from_str::<InputFormat>)]
    format: Option<InputFormat>,

    /// What to do with duplicates and strings contained in other strings.
    #[arg(long, default_value = "strict", value_parser = parse_from_str::<Policy>)]
    policy: Policy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Dot,
    Json,
    Stats,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,

    #[arg(long, default_value = "hog", value_parser = parse_from_str::<GraphKind>)]
    graph: GraphKind,

    /// Marking algorithm: optimal, quadratic or per-leaf.
    #[arg(long, default_value = "optimal", value_parser = parse_from_str::<Algorithm>)]
    algo: Algorithm,

    /// Build the HOG by marking the EHOG instead of the trie.
    #[arg(long)]
    via_ehog: bool,

    #[arg(long, value_enum, default_value = "json")]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Verify seeded random instances instead of an input file, e.g.
    /// `--random n=8 len=12 sigma=2 seed=42 reps=1000`. `n` and `len` are
    /// upper bounds on the number and length of strings.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE", conflicts_with_all = ["input", "format"])]
    random: Option<Vec<String>>,

    /// Print the reports as JSON.
    #[arg(long)]
    json: bool,

    /// Failure lines shown per check.
    #[arg(long, default_value_t = 10)]
    max_failures: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated sizes as NxLEN: N strings of LEN bytes.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_from_str::<Size>)]
    sizes: Vec<Size>,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    #[arg(long, value_delimiter = ',', default_value = "per-leaf,quadratic,optimal", value_parser = parse_from_str::<Algorithm>)]
    algos: Vec<Algorithm>,

    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Generator: random reads or the overlap-dense family.
    #[arg(long, default_value = "random", value_parser = parse_from_str::<Family>)]
    family: Family,

    #[arg(long, default_value_t = 4)]
    sigma: usize,

    /// Repetitions per size.
    #[arg(long, default_value_t = 1)]
    reps: usize,

    /// Pipelines run at once.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn parse_from_str<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<HogError>() {
            return match e.class() {
                ErrorClass::Io => 1,
                ErrorClass::Validation => 2,
                ErrorClass::Invariant => 3,
            };
        }
    }
    1
}

fn read_patterns(args: &InputArgs) -> anyhow::Result<PatternSet> {
    let raw = match &args.input {
        Some(path) => {
            let file = File::open(path)
                .map_err(HogError::from)
                .with_context(|| format!("cannot open {}", path.display()))?;
            load_patterns(file, args.format)
        }
        None => {
            let mut buf = Vec::new();
            io::stdin()
                .lock()
                .read_to_end(&mut buf)
                .map_err(HogError::from)?;
            load_patterns(buf.as_slice(), args.format)
        }
    }?;
    let validated = validate(raw, args.policy)?;
    if !validated.dropped.is_empty() {
        eprintln!(
            "note: dropped {} redundant strings",
            validated.dropped.len()
        );
    }
    Ok(validated.set)
}

fn write_stdout(text: &str) -> anyhow::Result<()> {
    let mut out = BufWriter::new(io::stdout().lock());
    out.write_all(text.as_bytes()).map_err(HogError::from)?;
    out.flush().map_err(HogError::from)?;
    Ok(())
}

fn cmd_build(args: BuildArgs) -> anyhow::Result<ExitCode> {
    let ps = read_patterns(&args.input)?;
    let trie = AcTrie::build(ps);
    let built = build_graph(
        &trie,
        BuildOptions {
            kind: args.graph,
            algorithm: args.algo,
            via_ehog: args.via_ehog,
        },
    )?;
    let doc = GraphDoc::from_graph(&built.graph);
    let text = match args.output {
        Output::Json => doc.to_json(),
        Output::Dot => doc.to_dot(),
        Output::Stats => {
            let ps = trie.shared_patterns();
            let mut s = String::new();
            s += &format!("graph: {}\n", doc.kind);
            s += &format!("patterns: {}\n", ps.len());
            s += &format!("total_length: {}\n", ps.total_length());
            s += &format!("trie_nodes: {}\n", trie.node_count());
            s += &format!("nodes: {}\n", doc.nodes.len());
            s += &format!("internal_nodes: {}\n", built.graph.internal_count());
            s += &format!("tree_edges: {}\n", doc.tree_edges.len());
            s += &format!("suffix_links: {}\n", doc.suffix_links.len());
            if let (Some(mark), Some(entries)) = (&built.mark, built.list_entries) {
                s += &format!("algorithm: {}\n", mark.algorithm);
                s += &format!(
                    "marked_on: {}\n",
                    if args.via_ehog { "ehog" } else { "trie" }
                );
                s += &format!("list_entries: {entries}\n");
                s += &format!("op_counter: {}\n", mark.op_counter);
                s += &format!("marks: {}\n", mark.marks);
            }
            s
        }
    };
    write_stdout(&text)?;
    Ok(ExitCode::SUCCESS)
}

/// Every graph a pattern set can produce, each verified against the oracle,
/// followed by a check that all HOG routes serialize identically.
fn verify_all(ps: &Arc<PatternSet>, label: &str) -> anyhow::Result<Vec<VerifyReport>> {
    let trie = AcTrie::build(Arc::clone(ps));
    let mut reports = Vec::new();
    let mut hogs = Vec::new();
    for kind in [GraphKind::Trie, GraphKind::Ehog] {
        let built = build_graph(
            &trie,
            BuildOptions {
                kind,
                ..Default::default()
            },
        )?;
        let doc = GraphDoc::from_graph(&built.graph);
        reports.push(oracle::verify_with(
            &doc,
            ps,
            Default::default(),
            &format!("{label}{kind}"),
        ));
    }
    for algorithm in Algorithm::ALL {
        for (route, built) in [
            ("trie", build_hog(&trie, algorithm)?),
            ("ehog", build_hog_via_ehog(&trie, algorithm)?),
        ] {
            let doc = GraphDoc::from_graph(&built.graph);
            let name = format!("{label}hog/{algorithm}/{route}");
            reports.push(oracle::verify_with(&doc, ps, Default::default(), &name));
            hogs.push((name, doc.to_json()));
        }
    }
    let failures: Vec<String> = hogs[1..]
        .iter()
        .filter(|(_, json)| *json != hogs[0].1)
        .map(|(name, _)| format!("{name} differs from {}", hogs[0].0))
        .collect();
    reports.push(VerifyReport {
        label: format!("{label}hog"),
        kind: GraphKind::Hog,
        passed: failures.is_empty(),
        checks: vec![oracle::Check {
            name: "cross_variant",
            passed: failures.is_empty(),
            failures,
        }],
    });
    Ok(reports)
}

struct RandomSpec {
    n: usize,
    len: usize,
    sigma: usize,
    seed: u64,
    reps: usize,
}

fn parse_random(tokens: &[String]) -> anyhow::Result<RandomSpec> {
    let mut spec = RandomSpec {
        n: 8,
        len: 12,
        sigma: 2,
        seed: 42,
        reps: 1000,
    };
    for token in tokens {
        let Some((key, value)) = token.split_once('=') else {
            bail!("--random expects KEY=VALUE, got `{token}`");
        };
        let value: u64 = value
            .parse()
            .with_context(|| format!("--random {key}: `{value}` is not a number"))?;
        match key {
            "n" => spec.n = value as usize,
            "len" => spec.len = value as usize,
            "sigma" => spec.sigma = value as usize,
            "seed" => spec.seed = value,
            "reps" => spec.reps = value as usize,
            _ => bail!("--random: unknown key `{key}` (expected n, len, sigma, seed, reps)"),
        }
    }
    if spec.n == 0 || spec.len == 0 || !(1..=256).contains(&spec.sigma) {
        bail!("--random: n and len must be positive and sigma in 1..=256");
    }
    Ok(spec)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let guard = oracle::size_guard_from_env();
    let mut reports = Vec::new();
    let instances = match &args.random {
        None => {
            let ps = read_patterns(&args.input)?;
            oracle::check_size_guard(&ps, guard)?;
            reports.extend(verify_all(&Arc::new(ps), "")?);
            1
        }
        Some(tokens) => {
            let spec = parse_random(tokens)?;
            let mut rng = GenRng::seed_from_u64(spec.seed);
            for rep in 0..spec.reps {
                let raw = random_small_instance(&mut rng, spec.n, spec.len, spec.sigma);
                let ps = validate(raw, Policy::DropContained)?.set;
                oracle::check_size_guard(&ps, guard)?;
                let batch = verify_all(&Arc::new(ps), &format!("#{rep} "))?;
                // only failing instances are reported individually
                reports.extend(batch.into_iter().filter(|r| !r.passed));
            }
            spec.reps
        }
    };
    let failed = reports.iter().filter(|r| !r.passed).count();
    let text = if args.json {
        serde_json::to_string_pretty(&reports).context("serializing reports")? + "\n"
    } else {
        let mut s: String = reports
            .iter()
            .map(|r| r.render_text(args.max_failures))
            .collect();
        if failed == 0 {
            s += &format!("all checks pass ({instances} instances)\n");
        } else {
            s += &format!("{failed} graphs failed verification\n");
        }
        s
    };
    write_stdout(&text)?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    if args.family == Family::Dense && args.sigma > 24 {
        bail!("--family dense supports --sigma up to 24");
    }
    if !(1..=256).contains(&args.sigma) {
        bail!("--sigma must be in 1..=256");
    }
    let config = BenchConfig {
        sizes: args.sizes,
        algorithms: args.algos,
        family: args.family,
        sigma: args.sigma,
        seed: args.seed,
        reps: args.reps,
        jobs: args.jobs,
    };
    let records = bench::run(&config)?;
    let csv = bench::to_csv(&records);
    match &args.csv {
        Some(path) => std::fs::write(path, csv)
            .map_err(HogError::from)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => write_stdout(&csv)?,
    }
    eprint!("{}", bench::render_slopes(&records));
    Ok(ExitCode::SUCCESS)
}
