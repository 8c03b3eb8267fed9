//! End-to-end tests of the `homembed` binary: file formats, exit codes,
//! reproducibility, and the documented oracle values.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_homembed"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .env_remove("HOMEMBED_SEED")
        .env_remove("HOMEMBED_THREADS")
        .output()
        .expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

/// A bank holding exactly one pattern, C4, with its single-bag certificate.
const C4_BANK: &str = r#"{"config":{"n":4,"d":2,"lambda_mode":"shifted","size_mode":"uniform-1-to-n","vertex_keep_prob":1.0,"edge_keep_prob":0.5,"treewidth_cap":null,"seed":0},"patterns":[{"ordinal":0,"drawn_k":3,"drawn_size":4,"vertices":4,"edges":[[0,1],[1,2],[2,3],[0,3]],"bags":[[0,1,2,3]],"tree_edges":[]}]}"#;

fn tmpdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("temp dir")
}

#[test]
fn sample_is_deterministic_and_manifested() {
    let dir = tmpdir();
    let args = ["sample", "--n", "41", "--count", "50", "--seed", "7", "--out", "bank.json"];
    assert_success(&run(dir.path(), &args));
    let first = read(dir.path(), "bank.json");
    let manifest = read(dir.path(), "bank.json.manifest.json");
    assert!(manifest.contains("\"subcommand\": \"sample\""));
    assert!(manifest.contains("sha256:"));

    let mut again = args;
    again[8] = "bank2.json";
    assert_success(&run(dir.path(), &again));
    assert_eq!(first, read(dir.path(), "bank2.json"));

    let mut other_seed = args;
    other_seed[6] = "8";
    other_seed[8] = "bank3.json";
    assert_success(&run(dir.path(), &other_seed));
    assert_ne!(first, read(dir.path(), "bank3.json"));
}

#[test]
fn sample_rejects_zero_count_and_bad_probabilities() {
    let dir = tmpdir();
    let out = run(
        dir.path(),
        &["sample", "--n", "5", "--count", "0", "--seed", "1", "--out", "x.json"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run(
        dir.path(),
        &[
            "sample", "--n", "5", "--count", "3", "--seed", "1", "--edge-keep", "0.0",
            "--out", "x.json",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let dir = tmpdir();
    let out = bin()
        .current_dir(dir.path())
        .args(["sample", "--n", "6", "--count", "5", "--out", "env.json"])
        .env("HOMEMBED_SEED", "7")
        .output()
        .unwrap();
    assert_success(&out);
    assert_success(&run(
        dir.path(),
        &["sample", "--n", "6", "--count", "5", "--seed", "7", "--out", "flag.json"],
    ));
    assert_eq!(read(dir.path(), "env.json"), read(dir.path(), "flag.json"));
}

#[test]
fn embed_reproduces_the_c4_into_k2_count() {
    let dir = tmpdir();
    fs::write(dir.path().join("bank.json"), C4_BANK).unwrap();
    fs::write(dir.path().join("k2.g6"), "A_\n").unwrap();
    assert_success(&run(
        dir.path(),
        &["embed", "--graphs", "k2.g6", "--bank", "bank.json", "--mode", "hom", "--out", "emb.csv"],
    ));
    assert_eq!(read(dir.path(), "emb.csv"), "graph_id,p0\n0,2\n");
}

#[test]
fn embed_truncated_zeroes_oversized_patterns_and_warns_past_bank_n() {
    let dir = tmpdir();
    fs::write(dir.path().join("bank.json"), C4_BANK).unwrap();
    // K3 (3 vertices < 4) and C6 (6 vertices > bank n = 4).
    fs::write(dir.path().join("graphs.g6"), "Bw\nEhEG\n").unwrap();
    let out = run(
        dir.path(),
        &[
            "embed", "--graphs", "graphs.g6", "--bank", "bank.json", "--mode", "truncated",
            "--out", "emb.csv",
        ],
    );
    assert_success(&out);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning"), "expected oversize warning, got: {stderr}");
    let body = read(dir.path(), "emb.csv");
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("graph_id,p0"));
    assert_eq!(lines.next(), Some("0,0")); // truncated: v(C4) > v(K3)
    assert_eq!(lines.next(), Some("1,36")); // hom(C4, C6) = tr(A^4) = 36
}

#[test]
fn embed_standardized_single_graph_gives_zero_row() {
    let dir = tmpdir();
    fs::write(dir.path().join("bank.json"), C4_BANK).unwrap();
    fs::write(dir.path().join("k2.g6"), "A_\n").unwrap();
    assert_success(&run(
        dir.path(),
        &[
            "embed", "--graphs", "k2.g6", "--bank", "bank.json", "--mode", "standardized",
            "--out", "emb.csv",
        ],
    ));
    let body = read(dir.path(), "emb.csv");
    let row = body.lines().nth(1).unwrap();
    let value: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(value, 0.0);
}

#[test]
fn embed_reports_bad_graph6_lines() {
    let dir = tmpdir();
    fs::write(dir.path().join("bank.json"), C4_BANK).unwrap();
    fs::write(dir.path().join("bad.g6"), "A_\nA_~~~\n").unwrap();
    let out = run(
        dir.path(),
        &["embed", "--graphs", "bad.g6", "--bank", "bank.json", "--mode", "hom", "--out", "x.csv"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn thread_count_never_changes_output_bytes() {
    let dir = tmpdir();
    assert_success(&run(
        dir.path(),
        &["sample", "--n", "8", "--count", "40", "--seed", "3", "--out", "bank.json"],
    ));
    assert_success(&run(
        dir.path(),
        &["gen", "--family", "csl", "--n", "9", "--skips", "2,3,4", "--out", "data.g6"],
    ));
    for (threads, out_name) in [("1", "a.csv"), ("2", "b.csv")] {
        assert_success(&run(
            dir.path(),
            &[
                "--threads", threads, "embed", "--graphs", "data.g6", "--bank", "bank.json",
                "--mode", "density", "--out", out_name,
            ],
        ));
    }
    assert_eq!(read(dir.path(), "a.csv"), read(dir.path(), "b.csv"));
}

#[test]
fn gram_dot_and_min_agree_with_hand_values() {
    let dir = tmpdir();
    // Two patterns K2 (ordinal 0) and K3 (ordinal 1), single-bag certificates.
    let bank = r#"{"config":{"n":3,"d":2,"lambda_mode":"shifted","size_mode":"uniform-1-to-n","vertex_keep_prob":1.0,"edge_keep_prob":0.5,"treewidth_cap":null,"seed":0},"patterns":[{"ordinal":0,"drawn_k":1,"drawn_size":2,"vertices":2,"edges":[[0,1]],"bags":[[0,1]],"tree_edges":[]},{"ordinal":1,"drawn_k":2,"drawn_size":3,"vertices":3,"edges":[[0,1],[0,2],[1,2]],"bags":[[0,1,2]],"tree_edges":[]}]}"#;
    fs::write(dir.path().join("bank.json"), bank).unwrap();
    // K2 and K3.
    fs::write(dir.path().join("graphs.g6"), "A_\nBw\n").unwrap();
    assert_success(&run(
        dir.path(),
        &[
            "embed", "--graphs", "graphs.g6", "--bank", "bank.json", "--mode", "truncated",
            "--out", "emb.csv",
        ],
    ));
    // Rows: K2 -> [2, 0] (K3 too big), K3 -> [6, 6].
    assert_eq!(read(dir.path(), "emb.csv"), "graph_id,p0,p1\n0,2,0\n1,6,6\n");
    assert_success(&run(
        dir.path(),
        &["gram", "--emb", "emb.csv", "--kernel", "min", "--out", "gram.csv"],
    ));
    let gram = read(dir.path(), "gram.csv");
    let mut lines = gram.lines();
    assert_eq!(lines.next(), Some("graph_id,0,1"));
    // k_min(K2, K3) = hom(K2,K2)·hom(K2,K3) = 12; k_min(K3,K3) = 36 + 36.
    assert_eq!(
        lines.next().unwrap(),
        "0,4.0000000000000000e0,1.2000000000000000e1"
    );
    assert_eq!(
        lines.next().unwrap(),
        "1,1.2000000000000000e1,7.2000000000000000e1"
    );
}

#[test]
fn hoeffding_prints_the_documented_values() {
    let dir = tmpdir();
    let out = run(dir.path(), &["hoeffding", "--eps", "0.1", "--delta", "0.1", "--sample-size", "100"]);
    assert_success(&out);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "611");
    let out = run(dir.path(), &["hoeffding", "--eps", "0.1", "--delta", "0.1", "--max-n", "5"]);
    assert_success(&out);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1883");
    // Exactly one of the two selectors.
    let out = run(dir.path(), &["hoeffding", "--eps", "0.1", "--delta", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(
        dir.path(),
        &["hoeffding", "--eps", "0.1", "--delta", "0.1", "--sample-size", "9", "--max-n", "5"],
    );
    assert_eq!(out.status.code(), Some(2));
    // Out-of-range parameters.
    let out = run(dir.path(), &["hoeffding", "--eps", "1.5", "--delta", "0.1", "--sample-size", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csl_generation_and_wl_collapse_end_to_end() {
    let dir = tmpdir();
    assert_success(&run(
        dir.path(),
        &[
            "gen", "--family", "csl", "--n", "41", "--skips", "2,3,4,5,6,9,11,12,13,16",
            "--out", "csl.g6",
        ],
    ));
    let data = read(dir.path(), "csl.g6");
    assert_eq!(data.lines().count(), 10);
    let labels = read(dir.path(), "csl.labels.csv");
    assert_eq!(labels.lines().count(), 11); // header + 10
    assert!(labels.starts_with("graph_id,label\n0,2\n"));

    assert_success(&run(
        dir.path(),
        &["wl1", "--graphs", "csl.g6", "--out", "wl.csv"],
    ));
    let wl = read(dir.path(), "wl.csv");
    let signatures: Vec<&str> = wl
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(signatures.len(), 10);
    assert!(
        signatures.iter().all(|s| s == &signatures[0]),
        "CSL classes must share one WL signature"
    );
}

#[test]
fn distinguish_reports_class_pairs_from_labels() {
    let dir = tmpdir();
    assert_success(&run(
        dir.path(),
        &["gen", "--family", "csl", "--n", "9", "--skips", "2,3,4", "--out", "csl.g6"],
    ));
    assert_success(&run(
        dir.path(),
        &["sample", "--n", "9", "--count", "60", "--seed", "11", "--out", "bank.json"],
    ));
    assert_success(&run(
        dir.path(),
        &[
            "embed", "--graphs", "csl.g6", "--bank", "bank.json", "--mode", "hom",
            "--out", "emb.csv",
        ],
    ));
    assert_success(&run(
        dir.path(),
        &[
            "distinguish", "--emb", "emb.csv", "--labels", "csl.labels.csv",
            "--out", "report.json",
        ],
    ));
    let report: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    assert_eq!(report["pairs_total"], 3);
    assert_eq!(report["mode"], "exact");
    assert!(report["by_class_pair"].as_object().unwrap().len() == 3);
}

#[test]
fn union_and_cycle_generation_round_trip() {
    let dir = tmpdir();
    assert_success(&run(
        dir.path(),
        &["gen", "--family", "cycle", "--n", "6", "--out", "c6.g6"],
    ));
    assert_success(&run(
        dir.path(),
        &["gen", "--family", "union", "--components", "cycle:3,cycle:3", "--out", "u.g6"],
    ));
    assert_eq!(read(dir.path(), "c6.g6"), "EhEG\n");
    assert_eq!(read(dir.path(), "u.g6"), "EwCW\n");
    // Degenerate families exit 2.
    let out = run(dir.path(), &["gen", "--family", "cycle", "--n", "2", "--out", "x.g6"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(dir.path(), &["gen", "--family", "nope", "--n", "3", "--out", "x.g6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn manifests_are_stable_apart_from_wall_clock() {
    let dir = tmpdir();
    let args = ["sample", "--n", "7", "--count", "9", "--seed", "2", "--out", "bank.json"];
    assert_success(&run(dir.path(), &args));
    let first = read(dir.path(), "bank.json.manifest.json");
    assert_success(&run(dir.path(), &args));
    let second = read(dir.path(), "bank.json.manifest.json");
    let strip = |s: &str| -> String {
        s.lines()
            .filter(|l| !l.contains("wall_clock_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&first), strip(&second));
}

#[test]
fn unreadable_paths_and_bad_banks_exit_two() {
    let dir = tmpdir();
    let out = run(
        dir.path(),
        &["embed", "--graphs", "no.g6", "--bank", "no.json", "--mode", "hom", "--out", "x.csv"],
    );
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("broken.json"), "{\"config\":").unwrap();
    fs::write(dir.path().join("k2.g6"), "A_\n").unwrap();
    let out = run(
        dir.path(),
        &[
            "embed", "--graphs", "k2.g6", "--bank", "broken.json", "--mode", "hom",
            "--out", "x.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gram_rejects_min_kernel_on_real_mode_embeddings() {
    let dir = tmpdir();
    fs::write(dir.path().join("bank.json"), C4_BANK).unwrap();
    fs::write(dir.path().join("g.g6"), "EhEG\n").unwrap();
    assert_success(&run(
        dir.path(),
        &["embed", "--graphs", "g.g6", "--bank", "bank.json", "--mode", "density", "--out", "e.csv"],
    ));
    let out = run(dir.path(), &["gram", "--emb", "e.csv", "--kernel", "min", "--out", "g.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated"));
}
