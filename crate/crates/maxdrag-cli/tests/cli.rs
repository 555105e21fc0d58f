//! End-to-end tests driving the compiled binary.

use sha2::{Digest, Sha256};
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxdrag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

/// Every manifest entry must hash to the file actually on disk.
fn assert_manifest_verifies(dir: &Path) {
    let manifest: serde_json::Value = serde_json::from_str(&read(dir, "manifest.json")).unwrap();
    let outputs = manifest["outputs"].as_array().expect("outputs array");
    assert!(!outputs.is_empty());
    for entry in outputs {
        let name = entry["path"].as_str().unwrap();
        let bytes = std::fs::read(dir.join(name)).unwrap();
        assert_eq!(bytes.len(), entry["bytes"].as_u64().unwrap() as usize, "{name} size");
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, entry["sha256"].as_str().unwrap(), "{name} hash");
    }
}

#[test]
fn eval_writes_verifiable_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "eval",
        "--family",
        "two-segment-line",
        "--alpha",
        "1.12",
        "--beta",
        "1.12",
        "--n1",
        "150",
        "--n2",
        "150",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let record: serde_json::Value = serde_json::from_str(&read(tmp.path(), "eval.json")).unwrap();
    let value = record["value"].as_f64().unwrap();
    assert!((value - 1.426).abs() < 0.05, "F = {value}");
    assert_eq!(record["n1"], 150);
    assert_eq!(record["discarded"], 0);

    let csv = read(tmp.path(), "eval.csv");
    assert!(csv.starts_with("shape_label,n1,n2,F,discarded_fraction,runtime_ms\n"));
    assert_eq!(csv.lines().count(), 2);

    assert_manifest_verifies(tmp.path());
}

#[test]
fn eval_accepts_a_shape_file() {
    let tmp = tempfile::tempdir().unwrap();
    let shape = tmp.path().join("shape.json");
    let cavity = maxdrag::geometry::make_rectangle(0.5).unwrap();
    std::fs::write(&shape, cavity.to_json()).unwrap();
    let out = run(&[
        "eval",
        "--shape-file",
        shape.to_str().unwrap(),
        "--n1",
        "100",
        "--n2",
        "100",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value = serde_json::from_str(&read(tmp.path(), "eval.json")).unwrap();
    assert_eq!(record["shape_label"], "rectangle(h=0.5)");
}

#[test]
fn bad_inputs_exit_with_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["eval", "--shape-file", "/nonexistent/shape.json", "--out", out_dir],
        vec!["eval", "--family", "nosuch", "--out", out_dir],
        vec!["eval", "--family", "mushroom", "--out", out_dir],
        vec!["eval", "--out", out_dir],
        vec!["reproduce", "--suite", "bogus", "--out", out_dir],
        vec!["optimize", "--family", "nosuch", "--out", out_dir],
        vec!["export-svg", "--family", "rectangle", "--height", "0.5", "--width", "-3", "--out", out_dir],
    ];
    for case in cases {
        let out = run(&case);
        assert_eq!(out.status.code(), Some(2), "{case:?}");
    }
}

#[test]
fn export_svg_is_deterministic() {
    let tmp_a = tempfile::tempdir().unwrap();
    let tmp_b = tempfile::tempdir().unwrap();
    for tmp in [&tmp_a, &tmp_b] {
        let out = run(&[
            "export-svg",
            "--family",
            "mushroom",
            "--eps",
            "0.1",
            "--out",
            tmp.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let doc_a = read(tmp_a.path(), "mushroom-eps-0-1.svg");
    let doc_b = read(tmp_b.path(), "mushroom-eps-0-1.svg");
    assert_eq!(doc_a, doc_b);
    assert!(doc_a.contains("<path"));
    assert_manifest_verifies(tmp_a.path());
}

#[test]
fn export_svg_draws_every_zigzag_flank() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "export-svg",
        "--family",
        "canonical-zigzag",
        "--psi",
        "0.6835",
        "--m",
        "10",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let name = std::fs::read_dir(tmp.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().into_string().unwrap())
        .find(|n| n.ends_with(".svg"))
        .expect("svg written");
    let doc = read(tmp.path(), &name);
    // ten flanks plus the dashed baseline
    assert_eq!(doc.matches("<line").count(), 11);
}

#[test]
fn reproduce_analytic_suite_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "reproduce",
        "--suite",
        "analytic",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("3/3 criteria pass"), "{text}");

    let json: serde_json::Value = serde_json::from_str(&read(tmp.path(), "reproduce.json")).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 3);
    assert_eq!(read(tmp.path(), "reproduce.txt"), text);
    assert_manifest_verifies(tmp.path());
}

#[test]
fn optimize_finds_a_good_symmetric_line() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "optimize",
        "--family",
        "symmetric-two-segment-line",
        "--budget",
        "60",
        "--seed",
        "7",
        "--n1",
        "100",
        "--n2",
        "100",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value = serde_json::from_str(&read(tmp.path(), "report.json")).unwrap();
    assert!(report["best_value"].as_f64().unwrap() > 1.40);
    assert_eq!(report["best_params"].as_array().unwrap().len(), 1);

    let history = read(tmp.path(), "history.csv");
    assert!(history.starts_with("eval,value,p0\n"));
    assert!(history.lines().count() > 10);

    assert!(read(tmp.path(), "best.svg").contains("<svg"));
    let manifest: serde_json::Value = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_manifest_verifies(tmp.path());
}

#[test]
fn sweep_tables_have_the_requested_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["sweep-psi", "--count", "12", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let csv = read(tmp.path(), "sweep_psi.csv");
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.starts_with("psi,F_analytic\n"));

    let tmp2 = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep-alpha",
        "--count",
        "5",
        "--n1",
        "100",
        "--n2",
        "100",
        "--out",
        tmp2.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = read(tmp2.path(), "sweep_alpha.csv");
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn zigzag_and_mushroom_tables_are_consistent() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "zigzag-converge",
        "--psi",
        "0.5",
        "--ms",
        "4,8",
        "--n1",
        "200",
        "--n2",
        "200",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(tmp.path(), "zigzag_converge.csv");
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        let fields: Vec<f64> = row.split(',').skip(2).map(|v| v.parse().unwrap()).collect();
        // billiard, splinter, and closed-form values agree loosely at this resolution
        assert!((fields[0] - fields[2]).abs() < 0.02, "{row}");
        assert!((fields[1] - fields[2]).abs() < 0.01, "{row}");
    }

    let tmp2 = tempfile::tempdir().unwrap();
    let out = run(&[
        "mushroom",
        "--eps",
        "0.3",
        "--n1",
        "200",
        "--n2",
        "200",
        "--out",
        tmp2.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(tmp2.path(), "mushroom.csv");
    let row: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    // measured resistance beats the closed-form lower bound
    assert!(row[3] > row[2], "{csv}");
}

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("knobs.json");
    std::fs::write(&config, r#"{"n1": 120, "n2": 110}"#).unwrap();

    let from_config = tmp.path().join("a");
    let out = run(&[
        "eval",
        "--family",
        "rectangle",
        "--height",
        "0.5",
        "--config",
        config.to_str().unwrap(),
        "--out",
        from_config.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value =
        serde_json::from_str(&read(&from_config, "eval.json")).unwrap();
    assert_eq!(record["n1"], 120);
    assert_eq!(record["n2"], 110);

    let flag_wins = tmp.path().join("b");
    let out = run(&[
        "eval",
        "--family",
        "rectangle",
        "--height",
        "0.5",
        "--n1",
        "90",
        "--config",
        config.to_str().unwrap(),
        "--out",
        flag_wins.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(&read(&flag_wins, "eval.json")).unwrap();
    assert_eq!(record["n1"], 90);
    assert_eq!(record["n2"], 110);

    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"n1": 120, "grid": 7}"#).unwrap();
    let out = run(&[
        "eval",
        "--family",
        "rectangle",
        "--height",
        "0.5",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        tmp.path().join("c").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verbose_echoes_output_hashes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "--verbose",
        "sweep-psi",
        "--count",
        "3",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sweep_psi.csv") && err.contains("sha256"), "{err}");
}

#[test]
fn thread_flag_is_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "--threads",
        "1",
        "eval",
        "--family",
        "rectangle",
        "--height",
        "0.5",
        "--n1",
        "80",
        "--n2",
        "80",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
