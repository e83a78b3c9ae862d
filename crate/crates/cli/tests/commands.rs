use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use streamwalk_cli::state;
use tempfile::TempDir;

fn streamwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_streamwalk")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = streamwalk(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

#[test]
fn directed_cycle_walks_deterministically() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "cycle.txt");
    fs::write(&input, "# 3-cycle\n0 1\n1 2\n2 0\n").unwrap();
    let st = path(&dir, "cycle.sk");
    let report =
        ok(&["ingest", "--mode", "directed", "--algo", "wr", "--n", "3", "--t", "4", "--in", &input, "--state", &st]);
    assert!(report.contains("forwarded_arcs: 3"), "{report}");
    let walks = ok(&["walk", "--state", &st, "--start", "0", "--count", "3"]);
    assert_eq!(walks, "0 1 2 0 1\n0 1 2 0 1\n0 1 2 0 1\n");
}

#[test]
fn undirected_walks_have_requested_length_and_repeat_under_a_seed() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "g.txt");
    let st = path(&dir, "g.sk");
    ok(&["gen", "--kind", "random-multi", "--n", "6", "--m", "12", "--seed", "4", "--out", &input]);
    ok(&["ingest", "--mode", "undirected", "--n", "6", "--t", "5", "--seed", "8", "--in", &input, "--state", &st]);
    let a = ok(&["walk", "--state", &st, "--start", "1", "--count", "20", "--seed", "3"]);
    let b = ok(&["walk", "--state", &st, "--start", "1", "--count", "20", "--seed", "3"]);
    assert_eq!(a, b);
    for line in a.lines() {
        if line != "FAIL" {
            assert_eq!(line.split_whitespace().count(), 6, "{line}");
            assert!(line.starts_with("1 "));
        }
    }
}

#[test]
fn every_algorithm_round_trips_through_a_state_file() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("wr", "directed", "insertion"),
        ("wor", "directed", "insertion"),
        ("undirected-sketch", "undirected", "insertion"),
        ("turnstile-directed", "directed", "turnstile"),
        ("turnstile-undirected", "undirected", "turnstile"),
    ];
    for (algo, mode, model) in cases {
        let input = path(&dir, &format!("{algo}.txt"));
        let st = path(&dir, &format!("{algo}.sk"));
        ok(&[
            "gen",
            "--kind",
            "random-multi",
            "--mode",
            mode,
            "--model",
            model,
            "--n",
            "5",
            "--m",
            "9",
            "--out",
            &input,
        ]);
        ok(&[
            "ingest", "--mode", mode, "--model", model, "--algo", algo, "--n", "5", "--t", "3", "--in", &input,
            "--state", &st,
        ]);
        let loaded = state::load(Path::new(&st)).unwrap();
        assert_eq!(loaded.config.algorithm.to_string(), algo);
        let mut bytes = Vec::new();
        state::write_state(&mut bytes, &loaded).unwrap();
        assert_eq!(bytes, fs::read(&st).unwrap());
        let dump = ok(&["dump", "--state", &st]);
        let json: serde_json::Value = serde_json::from_str(&dump).unwrap();
        assert_eq!(json["config"]["n"], 5);
    }
}

#[test]
fn gen_is_deterministic_per_seed() {
    let a = ok(&["gen", "--kind", "gadget-undirected", "--t", "16", "--seed", "2"]);
    let b = ok(&["gen", "--kind", "gadget-undirected", "--t", "16", "--seed", "2"]);
    let c = ok(&["gen", "--kind", "gadget-undirected", "--t", "16", "--seed", "3"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("# undirected gadget"));
    let d = ok(&["gen", "--kind", "gadget-directed", "--n", "6", "--t", "3", "--seed", "2"]);
    assert!(d.lines().skip(1).all(|l| l.split_whitespace().count() == 2));
}

#[test]
fn bad_inputs_are_rejected() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "bad.txt");
    let st = path(&dir, "bad.sk");
    fs::write(&input, "0 1\n1 9\n").unwrap();
    let out = streamwalk(&["ingest", "--mode", "directed", "--n", "3", "--in", &input, "--state", &st]);
    assert!(!out.status.success());

    fs::write(&input, "0 1 -1\n").unwrap();
    let out = streamwalk(&["ingest", "--mode", "directed", "--n", "3", "--in", &input, "--state", &st]);
    assert!(!out.status.success());

    let out = streamwalk(&[
        "ingest",
        "--mode",
        "directed",
        "--algo",
        "undirected-sketch",
        "--n",
        "3",
        "--in",
        &input,
        "--state",
        &st,
    ]);
    assert!(!out.status.success());

    fs::write(&input, "0 1\n").unwrap();
    ok(&["ingest", "--mode", "directed", "--n", "3", "--in", &input, "--state", &st]);
    let out = streamwalk(&["walk", "--state", &st, "--start", "3"]);
    assert!(!out.status.success());
    fs::write(&st, b"not a state").unwrap();
    assert!(!streamwalk(&["walk", "--state", &st, "--start", "0"]).status.success());
}

#[test]
fn verify_prints_json_records_and_sets_exit_status() {
    let out = streamwalk(&["verify", "--suite", "capacity"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines() {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(rec["pass"], true);
    }
    let out = streamwalk(&["verify", "--suite", "nonsense"]);
    assert!(!out.status.success());
}
