use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn onepass(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onepass"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = onepass(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

const TRIANGLE: &str = "#nodes=3\n0\t1\t0.5\n1\t2\t0.5\n0\t2\t0.5\n";

#[test]
fn ingest_fixture_weights() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    // alice/bob is mutual (mean 3), bob/carol one-way (5): span 3..5.
    write(d, "r.tsv", "alice\tbob\t4\nbob\talice\t2\nbob\tcarol\t5\n");
    ok(d, &["--output", "out", "ingest", "r.tsv", "--t", "5"]);
    assert_eq!(read(d, "out/normalized.tsv"), "#nodes=3\n0\t1\t1\n1\t2\t10\n");
    assert_eq!(read(d, "out/symbols.tsv"), "0\talice\n1\tbob\n2\tcarol\n");
    assert_eq!(read(d, "out/probabilistic.tsv"), "#nodes=3\n0\t1\t0.2\n1\t2\t1\n");
}

#[test]
fn ingest_rejects_empty_and_self_loop_inputs() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "empty.tsv", "");
    write(d, "loops.tsv", "a\ta\t3\nb\tb\t1\n");
    write(d, "bad.tsv", "a\tb\t3\na\tb\n");
    assert_eq!(onepass(d, &["ingest", "empty.tsv"]).status.code(), Some(2));
    assert_eq!(onepass(d, &["ingest", "loops.tsv"]).status.code(), Some(2));
    let out = onepass(d, &["ingest", "bad.tsv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(onepass(d, &["ingest", "missing.tsv"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(onepass(d, &["nonsense"]).status.code(), Some(1));
    assert_eq!(onepass(d, &["distance", "a.tsv"]).status.code(), Some(1));
    assert_eq!(onepass(d, &["--seed", "x", "sample", "g.tsv"]).status.code(), Some(1));
    assert_eq!(onepass(d, &["--help"]).status.code(), Some(0));
}

#[test]
fn capacity_errors_exit_three() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(onepass(d, &["oracle", "partitions", "13"]).status.code(), Some(3));
    let mut big = String::from("#nodes=13\n");
    for i in 0..12 {
        big.push_str(&format!("{i}\t{}\t0.5\n", i + 1));
    }
    write(d, "big.tsv", &big);
    assert_eq!(onepass(d, &["oracle", "ratio", "big.tsv"]).status.code(), Some(3));
}

#[test]
fn certain_graph_samples_are_identical() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "g.tsv", "#nodes=4\n0\t1\t1\n2\t3\t1\n");
    ok(d, &["--output", "s", "sample", "g.tsv", "--count", "2"]);
    assert_eq!(read(d, "s/sample_0.tsv"), read(d, "s/sample_1.tsv"));
    assert_eq!(read(d, "s/sample_0.tsv"), "0\t0\n1\t0\n2\t2\n3\t2\n");
}

#[test]
fn sampling_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "g.tsv", TRIANGLE);
    ok(d, &["--seed", "9", "--output", "a", "sample", "g.tsv", "--count", "5"]);
    ok(
        d,
        &[
            "--seed",
            "9",
            "--threads",
            "1",
            "--output",
            "b",
            "sample",
            "g.tsv",
            "--count",
            "5",
        ],
    );
    for i in 0..5 {
        let name = format!("sample_{i}.tsv");
        assert_eq!(read(&d.join("a"), &name), read(&d.join("b"), &name));
    }
}

#[test]
fn triangle_frequencies_match_oracle() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "g.tsv", TRIANGLE);
    let exact = ok(d, &["oracle", "distribution", "g.tsv"]);
    let expected: HashMap<String, f64> = exact
        .lines()
        .map(|l| {
            let (p, labels) = l.split_once('\t').unwrap();
            let (a, b) = p.split_once('/').unwrap_or((p, "1"));
            (
                labels.to_string(),
                a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
            )
        })
        .collect();
    assert_eq!(expected["0,0,0"], 0.5);
    assert_eq!(expected["0,1,2"], 0.125);

    let count = 100_000;
    ok(
        d,
        &[
            "--seed",
            "4",
            "--output",
            "s",
            "sample",
            "g.tsv",
            "--count",
            &count.to_string(),
        ],
    );
    let mut seen: HashMap<String, usize> = HashMap::new();
    for i in 0..count {
        let body = read(&d.join("s"), &format!("sample_{i}.tsv"));
        let labels: Vec<&str> = body.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
        *seen.entry(labels.join(",")).or_default() += 1;
    }
    for (labels, p) in &expected {
        let freq = *seen.get(labels).unwrap_or(&0) as f64 / count as f64;
        assert!((freq - p).abs() <= 0.01, "{labels}: {freq} vs {p}");
    }
}

#[test]
fn distance_examples() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "x.tsv", "0\t0\n1\t0\n2\t2\n");
    write(d, "y.tsv", "0\t0\n1\t0\n2\t0\n");
    write(d, "one.tsv", "0\t0\n1\t1\n");
    write(d, "z.tsv", "0\t0\n");
    // Merging a singleton into a pair costs 1 one way and 2 the other.
    assert_eq!(ok(d, &["distance", "x.tsv", "y.tsv"]), "1\n");
    assert_eq!(ok(d, &["distance", "y.tsv", "x.tsv"]), "2\n");
    assert_eq!(ok(d, &["distance", "--metric", "balcan", "x.tsv", "y.tsv"]), "1\n");
    let verbose = ok(d, &["distance", "--verbose", "x.tsv", "y.tsv"]);
    assert_eq!(
        verbose,
        "1\nsample_cluster\treference_cluster\tcost\tbenefit\n0\t0\t1\t2\n"
    );
    assert_eq!(onepass(d, &["distance", "x.tsv", "z.tsv"]).status.code(), Some(2));
    assert_eq!(onepass(d, &["distance", "one.tsv", "x.tsv"]).status.code(), Some(2));
}

#[test]
fn select_writes_choice_and_scores() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    // Tightness distribution for k = 4: singletons with mass 3/4.
    write(d, "k4.tsv", "3/4\t0,1\n1/4\t0,0\n");
    let summary = ok(
        d,
        &[
            "--seed",
            "5",
            "--output",
            "o",
            "select",
            "k4.tsv",
            "--distribution",
            "--m",
            "8",
            "--l",
            "64",
        ],
    );
    assert!(summary.starts_with("m=8 l=64 "));
    assert_eq!(read(d, "o/chosen.tsv"), "0\t0\n1\t1\n");
    let scores = read(d, "o/scores.csv");
    let mut lines = scores.lines();
    assert_eq!(lines.next(), Some("candidate_index,d_i"));
    assert_eq!(lines.count(), 8);

    let derived = ok(
        d,
        &[
            "--output",
            "p",
            "select",
            "k4.tsv",
            "--distribution",
            "--epsilon",
            "1",
            "--tau",
            "0.5",
        ],
    );
    assert!(derived.starts_with("m=1 "), "{derived}");
}

#[test]
fn sweep_outputs_are_deterministic() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let mut g = String::from("#nodes=12\n");
    for i in 0..11 {
        g.push_str(&format!("{i}\t{}\t{}\n", i + 1, 1 + i % 10));
    }
    write(d, "w.tsv", &g);
    let args = |out: &'static str| {
        vec![
            "--seed",
            "2",
            "--output",
            out,
            "sweep",
            "w.tsv",
            "--t-min",
            "2",
            "--t-max",
            "10",
            "--t-step",
            "4",
            "--samples-per-t",
            "4",
        ]
    };
    ok(d, &args("a"));
    ok(d, &args("b"));
    for name in ["sizes.csv", "benefits.csv", "distances.csv"] {
        assert_eq!(read(&d.join("a"), name), read(&d.join("b"), name), "{name}");
    }
    let distances = read(&d.join("a"), "distances.csv");
    let mut lines = distances.lines();
    assert_eq!(lines.next(), Some("t,i,j,symdiff_distance,balcan_distance"));
    let rows: Vec<Vec<u64>> = lines
        .map(|l| l.split(',').skip(3).map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3 * 6);
    for r in rows {
        assert!(r[1] <= r[0] && r[0] <= 2 * r[1] && r[0] <= 12);
    }
    assert!(read(&d.join("a"), "sizes.csv").starts_with("t,sample_index,component_size,count\n"));
    assert!(read(&d.join("a"), "benefits.csv").starts_with("t,pair_index,benefit,count\n"));
}

#[test]
fn oracle_tightness_ratio() {
    let tmp = TempDir::new().unwrap();
    let out = ok(tmp.path(), &["oracle", "tightness", "10"]);
    assert!(out.contains("optimal_cost\t1/10 "), "{out}");
    assert!(out.contains("sample_cost\t27/100 "), "{out}");
    assert!(out.contains("ratio\t27/10 "), "{out}");
    let parts = ok(tmp.path(), &["oracle", "partitions", "4"]);
    assert_eq!(parts.lines().count(), 15);
}
