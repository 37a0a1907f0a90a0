use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use hogkit::GraphDoc;

const THREE: &str = "aabaa\naadbd\ndbdaa\n";

fn hogkit(args: &[&str], stdin: &str) -> Output {
    hogkit_env(args, stdin, &[])
}

fn hogkit_env(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hogkit"))
        .args(args)
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn build_three_strings_json() {
    let path = fixture("three.txt", THREE);
    let out = hogkit(
        &["build", "--input", path.to_str().unwrap(), "--graph", "hog"],
        "",
    );
    assert!(out.status.success());
    let doc = GraphDoc::from_json(&stdout(&out)).unwrap();
    let spelled = doc.spell_nodes();
    let mut internal: Vec<String> = doc
        .nodes
        .iter()
        .filter(|n| n.id != 0 && !n.is_leaf)
        .map(|n| String::from_utf8(spelled[n.id].clone().unwrap()).unwrap())
        .collect();
    internal.sort();
    assert_eq!(internal, ["aa", "dbd"]);
}

#[test]
fn algorithms_and_routes_give_identical_bytes() {
    let reference = hogkit(&["build"], THREE);
    assert!(reference.status.success());
    for algo in ["optimal", "quadratic", "per-leaf"] {
        for extra in [None, Some("--via-ehog")] {
            let mut args = vec!["build", "--graph", "hog", "--algo", algo];
            args.extend(extra);
            let out = hogkit(&args, THREE);
            assert!(out.status.success());
            assert_eq!(out.stdout, reference.stdout, "{args:?}");
        }
    }
    for output in ["dot", "json", "stats"] {
        let a = hogkit(&["build", "--output", output], THREE);
        let b = hogkit(&["build", "--output", output], THREE);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn fasta_input_and_other_kinds() {
    let fasta = ">r1\naab\naa\n>r2\naadbd\n>r3 third\ndbdaa\n";
    let a = hogkit(&["build", "--format", "fasta"], fasta);
    assert!(a.status.success());
    assert_eq!(a.stdout, hogkit(&["build"], THREE).stdout);
    let ehog = hogkit(&["build", "--graph", "ehog", "--output", "stats"], THREE);
    assert!(stdout(&ehog).contains("internal_nodes: 4\n"));
    let trie = hogkit(&["build", "--graph", "trie", "--output", "stats"], THREE);
    assert!(stdout(&trie).contains("nodes: 14\n"));
    let dot = hogkit(&["build", "--output", "dot"], THREE);
    assert!(stdout(&dot).starts_with("digraph hog {"));
}

#[test]
fn strict_policy_rejects_duplicates() {
    let out = hogkit(&["build", "--policy", "strict"], "ab\ncd\nab\n");
    assert_eq!(out.status.code(), Some(2));
    let out = hogkit(&["build", "--policy", "strict"], "abc\nb\n");
    assert_eq!(out.status.code(), Some(2));
    let out = hogkit(
        &["build", "--policy", "drop-contained", "--output", "stats"],
        "ab\ncd\nab\nb\n",
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("patterns: 2\n"));
}

#[test]
fn io_errors_exit_one() {
    let out = hogkit(&["build", "--input", "/definitely/not/here"], "");
    assert_eq!(out.status.code(), Some(1));
    let out = hogkit(&["build"], "");
    assert_eq!(
        out.status.code(),
        Some(2),
        "an empty set is a validation failure"
    );
}

#[test]
fn verify_three_strings() {
    let out = hogkit(&["verify"], THREE);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all checks pass"));
    let json = hogkit(&["verify", "--json"], THREE);
    assert!(json.status.success());
    assert!(stdout(&json).contains("\"cross_variant\""));
}

#[test]
fn verify_random_corpus() {
    let out = hogkit(
        &[
            "verify",
            "--random",
            "n=8",
            "len=12",
            "sigma=2",
            "seed=42",
            "reps=1000",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("all checks pass (1000 instances)"));
    let bad = hogkit(&["verify", "--random", "colour=3"], "");
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_size_guard() {
    let big: String = (0..200).map(|i| format!("{i:0>600}\n")).collect();
    let out = hogkit(&["verify"], &big);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
    let out = hogkit_env(&["verify"], THREE, &[("HOGKIT_SIZE_GUARD", "10")]);
    assert_eq!(out.status.code(), Some(2));
    let out = hogkit_env(&["verify"], THREE, &[("HOGKIT_SIZE_GUARD", "15")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bench_csv_and_slopes() {
    let csv = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bench.csv");
    let out = hogkit(
        &[
            "bench",
            "--sizes",
            "100x30,200x30",
            "--seed",
            "3",
            "--algos",
            "optimal,quadratic",
            "--csv",
            csv.to_str().unwrap(),
        ],
        "",
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algo,n,total_length,wall_time_ns,op_counter,node_count,list_entries"
    );
    assert_eq!(lines.len(), 5);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("slope optimal:"));
    assert!(stderr.contains("slope quadratic:"));

    let unary = hogkit(&["bench", "--sizes", "50x100", "--sigma", "1"], "");
    assert!(unary.status.success());
    let dense = hogkit(&["bench", "--sizes", "100x50", "--family", "dense"], "");
    assert!(dense.status.success());
}
