use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphboost"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A small two-class dataset in the text format.
fn toy_data(dir: &Path) -> PathBuf {
    let mut text = String::from("% toy\n");
    for i in 0..24 {
        let label = if i % 2 == 0 { 1 } else { -1 };
        let mid = if i % 2 == 0 { "O" } else { "N" };
        let tail = if i % 3 == 0 { "C" } else { "S" };
        text.push_str(&format!("t # g{i} {label}\nv 0 C\nv 1 {mid}\nv 2 {tail}\ne 0 1 -\ne 1 2 -\n"));
    }
    let path = dir.join("toy.txt");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn gen_xor_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("xor.txt");
    let stdout = ok(&["gen-xor", "--out", s(&out)]);
    assert!(stdout.contains("1035 graphs (506 positive, 529 negative)"), "{stdout}");
    let again = dir.path().join("xor2.txt");
    ok(&["gen-xor", "--out", s(&again)]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["train", "--bogus"]).status.code(), Some(1));
    let data = toy_data(dir.path());
    let model = dir.path().join("m.txt");
    assert_eq!(run(&["train", "--data", s(&data), "--out-model", s(&model), "--eta", "0"]).status.code(), Some(1));
    assert_eq!(run(&["train", "--data", s(&data), "--out-model", s(&model), "--depth", "2,3"]).status.code(), Some(1));

    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["train", "--data", s(&missing), "--out-model", s(&model)]).status.code(), Some(2));
    let broken = dir.path().join("broken.txt");
    std::fs::write(&broken, "t # a 1\nv 0 C\ne 0 5 -\n").unwrap();
    assert_eq!(run(&["train", "--data", s(&broken), "--out-model", s(&model)]).status.code(), Some(2));

    let xor = dir.path().join("xor.txt");
    ok(&["gen-xor", "--out", s(&xor)]);
    let over = run(&[
        "cv",
        "--data",
        s(&xor),
        "--mode",
        "naive",
        "--max-edges",
        "4",
        "--folds",
        "2",
        "--num-trees",
        "2",
        "--memory-budget",
        "1K",
    ]);
    assert_eq!(over.status.code(), Some(3), "{}", String::from_utf8_lossy(&over.stderr));
    let unbounded =
        run(&["cv", "--data", s(&xor), "--mode", "naive", "--max-edges", "inf", "--folds", "2", "--num-trees", "2"]);
    assert_eq!(unbounded.status.code(), Some(1));
}

#[test]
fn train_predict_round_trip_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy_data(dir.path());
    let (m1, m2) = (dir.path().join("m1.txt"), dir.path().join("m2.txt"));
    let common = ["--data", s(&data), "--max-edges", "2", "--depth", "2", "--num-trees", "15"];
    ok(&[&["train", "--out-model", s(&m1)][..], &common].concat());
    ok(&[&["--jobs", "2", "train", "--out-model", s(&m2)][..], &common].concat());
    assert_eq!(std::fs::read(&m1).unwrap(), std::fs::read(&m2).unwrap());

    let scores = ok(&["predict", "--model", s(&m1), "--data", s(&data)]);
    let lines: Vec<&str> = scores.lines().collect();
    assert_eq!(lines[0], "id\tscore\tlabel");
    assert_eq!(lines.len(), 25);
    // the toy classes are separable by the middle label
    for (i, line) in lines[1..].iter().enumerate() {
        let label: f64 = line.split('\t').nth(2).unwrap().parse().unwrap();
        assert_eq!(label, if i % 2 == 0 { 1.0 } else { -1.0 }, "{line}");
    }
    assert_eq!(scores, ok(&["predict", "--model", s(&m2), "--data", s(&data)]));

    let imp = ok(&["importance", "--model", s(&m1), "--data", s(&data), "--top", "1"]);
    assert!(imp.lines().nth(1).unwrap().starts_with("1.000000\t"), "{imp}");
}

#[test]
fn cv_writes_report_and_plots_and_ignores_pruning() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy_data(dir.path());
    let (r1, r2) = (dir.path().join("r1.json"), dir.path().join("r2.json"));
    let plots = dir.path().join("plots");
    let args = ["cv", "--data", s(&data), "--folds", "3", "--max-edges", "1,2", "--depth", "1,2", "--num-trees", "8"];
    ok(&[&args[..], &["--report", s(&r1), "--plot-dir", s(&plots)]].concat());
    ok(&[&args[..], &["--report", s(&r2), "--no-prune"]].concat());

    let load = |p: &Path| -> serde_json::Value { serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap() };
    let (a, b) = (load(&r1), load(&r2));
    assert_eq!(a["schema"], "graphboost-cv-report/1");
    assert_eq!(a["configs"].as_array().unwrap().len(), 4);
    for (x, y) in a["best"]["per_fold"].as_array().unwrap().iter().zip(b["best"]["per_fold"].as_array().unwrap()) {
        assert_eq!(x["accuracy"], y["accuracy"]);
        assert_eq!(x["loss"], y["loss"]);
    }
    for name in ["curves.tsv", "by_depth.tsv", "by_size.tsv"] {
        let text = std::fs::read_to_string(plots.join(name)).unwrap();
        assert!(text.lines().count() > 8, "{name}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy_data(dir.path());
    let config = dir.path().join("gb.toml");
    std::fs::write(&config, "depth = 1\nnum_trees = 3\nmax_edges = 2\n").unwrap();
    let model = dir.path().join("m.txt");
    ok(&["--config", s(&config), "train", "--data", s(&data), "--out-model", s(&model)]);
    let text = std::fs::read_to_string(&model).unwrap();
    assert!(text.contains("max_depth 1 num_trees 3"), "{text}");
    ok(&["--config", s(&config), "train", "--data", s(&data), "--out-model", s(&model), "--depth", "2"]);
    let text = std::fs::read_to_string(&model).unwrap();
    assert!(text.contains("max_depth 2 num_trees 3"), "{text}");

    std::fs::write(&config, "depht = 1\n").unwrap();
    assert_eq!(
        run(&["--config", s(&config), "train", "--data", s(&data), "--out-model", s(&model)]).status.code(),
        Some(1)
    );
}

#[test]
fn mine_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy_data(dir.path());
    let mined = ok(&["mine", "--data", s(&data), "--max-edges", "1"]);
    assert_eq!(mined.lines().next(), Some("support\tedges\tcode"));
    assert!(mined.lines().skip(1).all(|l| l.split('\t').nth(1) == Some("1")));
    let tsv = ok(&["bench", "--data", s(&data), "--max-edges-list", "1,2", "--folds", "2", "--num-trees", "3"]);
    assert_eq!(tsv.lines().count(), 3);
    assert!(tsv.lines().skip(1).all(|l| l.contains("\tok\t")), "{tsv}");
}
