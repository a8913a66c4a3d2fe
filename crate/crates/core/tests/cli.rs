use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use scan_entropy::evaluation::PredictionSet;
use scan_entropy::io::read_jsonl_file;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scan-entropy"))
        .args(args)
        .output()
        .expect("failed to spawn scan-entropy")
}

fn ok(args: &[&str]) -> String {
    let out = bin(args);
    assert!(
        out.status.success(),
        "{args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn subdirs(path: &Path) -> Vec<String> {
    let mut names: Vec<_> = fs::read_dir(path)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn generate_vertical_max_entropy() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("H3");
    ok(&["generate", "--experiment", "vertical", "--entropy", "3", "--out", p(&dir)]);
    assert_eq!(read_jsonl_file(&dir.join("train.jsonl")).unwrap().len(), 6000);
    assert_eq!(read_jsonl_file(&dir.join("test.jsonl")).unwrap().len(), 7056);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 0);

    let report = ok(&["inspect", "--data", p(&dir.join("test.jsonl"))]);
    assert!(report.contains("split: test"), "{report}");
    assert!(report.contains("samples: 7056"), "{report}");
    assert!(report.contains("constraint violations: 0"), "{report}");
}

#[test]
fn generate_horizontal_single_verb() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("h1");
    ok(&["generate", "--experiment", "horizontal", "--support", "1", "--out", p(&dir)]);
    let train = read_jsonl_file(&dir.join("train.jsonl")).unwrap();
    assert_eq!(train.len(), 6174);
    let report = ok(&["inspect", "--data", p(&dir.join("train.jsonl"))]);
    assert!(report.contains("entropy e2|and: 0.000000"), "{report}");
    assert!(report.contains("entropy e1|after: 0.000000"), "{report}");
    assert!(report.contains("constraint violations: 0"), "{report}");
    assert!(report.contains("output mismatches: 0"), "{report}");
}

#[test]
fn zero_entropy_train_is_clean() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("H0");
    ok(&["generate", "--experiment", "vertical", "--entropy", "0", "--out", p(&dir)]);
    let report = ok(&["inspect", "--data", p(&dir.join("train.jsonl"))]);
    assert!(report.contains("split: train"), "{report}");
    assert!(report.contains("samples: 6000"), "{report}");
    assert!(report.contains("entropy e2|and: 0.000000"), "{report}");
    assert!(report.contains("constraint violations: 0"), "{report}");
    assert!(report.contains("duplicates: 0"), "{report}");
}

#[test]
fn out_of_range_entropy_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("bad");
    let out = bin(&["generate", "--experiment", "vertical", "--entropy", "3.5", "--out", p(&dir)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    assert!(!dir.exists());

    let out = bin(&["schedule", "--entropy", "-0.1"]);
    assert!(!out.status.success());
}

#[test]
fn schedule_round_trips() {
    for target in [0.0, 0.5, 1.5, 2.25, 3.0] {
        let text = ok(&["schedule", "--entropy", &target.to_string(), "--v1", "walk"]);
        let mut lines = text.lines();
        let lambda: f64 = lines.next().unwrap().strip_prefix("lambda: ").unwrap().parse().unwrap();
        assert!((0.0..=0.875).contains(&lambda));
        assert_eq!(lines.next(), Some("restricted verb: walk"));
        let h: f64 = lines.next().unwrap().strip_prefix("entropy: ").unwrap().parse().unwrap();
        assert!((h - target).abs() < 1e-8, "{target} -> {h}");
        let probs: Vec<f64> = lines
            .map(|l| l.split_once(' ').unwrap().1.parse().unwrap())
            .collect();
        assert_eq!(probs.len(), 8);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((probs[3] - (1.0 - lambda)).abs() < 1e-12);
    }
}

#[test]
fn evaluate_five_seeds_gives_one_row() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("data");
    ok(&["generate", "--experiment", "vertical", "--entropy", "1", "--train-size", "200", "--out", p(&dir)]);
    let gold_path = dir.join("test.jsonl");
    let gold = read_jsonl_file(&gold_path).unwrap();

    let mut preds = Vec::new();
    for seed in 0..5 {
        let mut outputs: Vec<String> = gold.iter().map(|s| s.output.clone()).collect();
        // seed k gets k wrong answers
        for o in outputs.iter_mut().take(seed) {
            o.push_str(" JUMP");
        }
        let set = PredictionSet::from_outputs(outputs).with_labels("lstm", &seed.to_string(), 1.0);
        let path = tmp.path().join(format!("pred{seed}.tsv"));
        fs::write(&path, set.to_tsv()).unwrap();
        preds.push(path);
    }
    let report = tmp.path().join("report.txt");
    let mut args = vec!["evaluate", "--gold", p(&gold_path), "--out", p(&report), "--pred"];
    args.extend(preds.iter().map(|x| p(x)));
    ok(&args);

    let table = fs::read_to_string(&report).unwrap();
    let lines: Vec<_> = table.lines().collect();
    assert_eq!(lines.len(), 2, "{table}");
    assert_eq!(lines[0], "entropies accuracy std");
    let cols: Vec<f64> = lines[1].split_whitespace().map(|c| c.parse().unwrap()).collect();
    let n = gold.len() as f64;
    let accs: Vec<f64> = (0..5).map(|k| 1.0 - k as f64 / n).collect();
    let mean = accs.iter().sum::<f64>() / 5.0;
    let std = (accs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / 5.0).sqrt();
    assert_eq!(cols[0], 1.0);
    assert!((cols[1] - mean).abs() < 5e-7);
    assert!((cols[2] - std).abs() < 5e-7);
}

#[test]
fn evaluate_rejects_incomplete_predictions() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("H2");
    ok(&["generate", "--experiment", "vertical", "--entropy", "2", "--train-size", "100", "--out", p(&dir)]);
    let gold_path = dir.join("test.jsonl");
    let gold = read_jsonl_file(&gold_path).unwrap();
    let set = PredictionSet::from_outputs(gold.iter().skip(3).map(|s| s.output.clone()));
    let pred = dir.join("pred.tsv");
    fs::write(&pred, set.to_tsv()).unwrap();
    let report = tmp.path().join("report.txt");
    let out = bin(&["evaluate", "--gold", p(&gold_path), "--pred", p(&pred), "--out", p(&report)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing"));
    assert!(!report.exists());
}

#[test]
fn vertical_suite_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("suite");
    ok(&["suite", "--experiment", "vertical", "--sizes", "500", "--out", p(&out)]);
    let levels = subdirs(&out.join("vertical"));
    assert_eq!(levels.len(), 7, "{levels:?}");
    assert_eq!(levels[0], "H0.000000");
    assert_eq!(levels[6], "H3.000000");
    for level in &levels {
        let cell = out.join("vertical").join(level).join("N500");
        assert_eq!(read_jsonl_file(&cell.join("train.jsonl")).unwrap().len(), 500);
    }
}

#[test]
fn sample_size_suite_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("suite");
    ok(&[
        "suite", "--experiment", "sample-size-control", "--grid", "0,1.5,3",
        "--sizes", "300,400,600", "--out", p(&out),
    ]);
    let root = out.join("sample-size-control");
    let mut trains = 0;
    for level in subdirs(&root) {
        for size in subdirs(&root.join(&level)) {
            let n: usize = size.strip_prefix('N').unwrap().parse().unwrap();
            let train = read_jsonl_file(&root.join(&level).join(&size).join("train.jsonl")).unwrap();
            assert_eq!(train.len(), n);
            trains += 1;
        }
    }
    assert_eq!(trains, 9);
}

#[test]
fn horizontal_suite_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("suite");
    ok(&["suite", "--experiment", "horizontal", "--out", p(&out)]);
    let levels = subdirs(&out.join("horizontal"));
    assert_eq!(levels.len(), 8, "{levels:?}");

    let bad = bin(&["suite", "--experiment", "horizontal", "--sizes", "100", "--out", p(&tmp.path().join("x"))]);
    assert!(!bad.status.success());
    let dup = bin(&["suite", "--experiment", "vertical", "--grid", "1,1", "--out", p(&tmp.path().join("y"))]);
    assert!(!dup.status.success());
}
