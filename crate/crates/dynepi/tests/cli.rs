use std::path::PathBuf;
use std::process::Command;

use dynepi::{load_model, save_model};
use dynepi_core::puzzles;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["dynepi"];
    argv.extend_from_slice(args);
    let code = dynepi::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fixtures_are_current() {
    for (name, model) in [
        ("cheryl.model", puzzles::build_cheryl()),
        ("blind.model", puzzles::build_blind()),
        ("abby.model", puzzles::build_abby()),
    ] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(
            text,
            save_model(&model),
            "{name} out of date, run the write_fixtures example"
        );
        assert_eq!(load_model(text.as_bytes()).unwrap(), model);
    }
}

#[test]
fn puzzle_answers() {
    assert_eq!(
        run(&["puzzle", "cheryl"]),
        (0, "July 16\n".into(), String::new())
    );
    assert_eq!(run(&["puzzle", "blind"]).1, "4\n");
    assert_eq!(run(&["puzzle", "abby"]).1, "Monday\n");
}

#[test]
fn puzzle_traces() {
    let (code, out, _) = run(&["puzzle", "cheryl", "--trace"]);
    assert_eq!(code, 0);
    assert!(out.contains("counts: 10 5 3 1\n"));
    let (_, out, _) = run(&["puzzle", "abby", "--trace"]);
    assert!(out.contains("counts: 14 12 10 8 6 4 2\n"));
    let (_, out, _) = run(&["puzzle", "blind", "--trace"]);
    assert!(out.contains("counts: 84 16 7 6 6\n"));
}

#[test]
fn puzzle_dot_rounds() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["puzzle", "cheryl", "--dot", path_str(dir.path())]);
    assert_eq!(code, 0);
    for k in 0..4 {
        assert!(dir.path().join(format!("round-{k}.dot")).exists());
    }
    assert!(!dir.path().join("round-4.dot").exists());
    let last = std::fs::read_to_string(dir.path().join("round-3.dot")).unwrap();
    assert!(last.contains("\"July-16\" [label="));
    assert!(!last.contains(" -- "));
}

#[test]
fn check_at_world() {
    let model = fixture("cheryl.model");
    let (code, out, _) = run(&[
        "check",
        "--model",
        path_str(&model),
        "--formula",
        "Kv Bernard day",
        "--world",
        "June-18",
    ]);
    assert_eq!((code, out.as_str()), (0, "true\n"));
    let (_, out, _) = run(&[
        "check",
        "--model",
        path_str(&model),
        "--formula",
        "Kv Bernard (month, day)",
        "--world",
        "May-15",
    ]);
    assert_eq!(out, "false\n");
}

#[test]
fn check_lists_satisfying_worlds() {
    let model = fixture("cheryl.model");
    let (code, out, _) = run(&[
        "check",
        "--model",
        path_str(&model),
        "--formula",
        "K Albert ~Kv Bernard (month, day)",
    ]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = out.lines().collect();
    assert_eq!(
        ids,
        ["July-14", "July-16", "August-14", "August-15", "August-17"]
    );
}

#[test]
fn update_writes_model() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("after.model");
    let (code, out, _) = run(&[
        "update",
        "--model",
        path_str(&fixture("cheryl.model")),
        "--formula",
        "K Albert ~Kv Bernard (month, day)",
        "--out",
        path_str(&target),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "5 of 10 worlds remain\n");
    let m = load_model(&std::fs::read(&target).unwrap()).unwrap();
    assert_eq!(m.len(), 5);
    assert!(m.partitions_valid());
}

#[test]
fn validation_errors_exit_2() {
    let model = fixture("cheryl.model");
    let (code, _, err) = run(&[
        "check",
        "--model",
        path_str(&model),
        "--formula",
        "K Albert (",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("1:10"), "{err}");
    let (code, _, _) = run(&[
        "check",
        "--model",
        path_str(&model),
        "--formula",
        "Kv Carol day",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&[
        "check",
        "--model",
        path_str(&model),
        "--formula",
        "day = 16",
        "--world",
        "Nowhere",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&[
        "check",
        "--model",
        "/nonexistent.model",
        "--formula",
        "day = 16",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["prison", "exact", "--protocol", "uniform", "--n", "31"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["prison", "closed-form", "0", "0", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&[
        "prison",
        "simulate",
        "--protocol",
        "counter",
        "--n",
        "3",
        "--runs",
        "1",
        "--seed",
        "0",
        "--counter",
        "3",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["bogus"]).0, 1);
    assert_eq!(run(&["puzzle", "muddy"]).0, 1);
    assert_eq!(run(&["prison", "simulate", "--protocol", "uniform"]).0, 1);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("puzzle"));
}

#[test]
fn closed_form() {
    assert_eq!(run(&["prison", "closed-form", "1", "1", "1"]).1, "24\n");
    assert_eq!(run(&["prison", "closed-form", "1", "1", "0"]).1, "9\n");
}

#[test]
fn exact_reports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let (code, out, _) = run(&[
        "prison",
        "exact",
        "--protocol",
        "uniform",
        "--n",
        "3",
        "--csv",
        path_str(&csv),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"], "10");
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("tokens,light,expected_days\n"));
    assert!(table.contains("1 1,on,9\n"));

    let (_, out, _) = run(&["prison", "exact", "--protocol", "counter", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"], "21/2");
}

#[test]
fn simulate_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("runs.csv");
    let args = [
        "prison",
        "simulate",
        "--protocol",
        "uniform",
        "--n",
        "4",
        "--runs",
        "50",
        "--seed",
        "9",
        "--csv",
    ];
    let mut argv = args.to_vec();
    argv.push(path_str(&csv));
    let (code, out, _) = run(&argv);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["runs"], 50);
    assert_eq!(v["terminated"], 50);
    assert_eq!(v["safety_violations"], 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("run,seed,escape_day,capped"));
    assert_eq!(lines.next().unwrap().split(',').nth(1), Some("9"));
    assert_eq!(lines.count(), 49);

    // same seed, serial: same report
    let (_, again, _) = run(&[
        "prison",
        "simulate",
        "--protocol",
        "uniform",
        "--n",
        "4",
        "--runs",
        "50",
        "--seed",
        "9",
        "--serial",
    ]);
    assert_eq!(out, again);
}

#[test]
fn simulate_warns_on_cap() {
    let (code, out, err) = run(&[
        "prison",
        "simulate",
        "--protocol",
        "mixed",
        "--probability",
        "0",
        "--n",
        "5",
        "--runs",
        "3",
        "--seed",
        "1",
        "--cap",
        "200",
    ]);
    assert_eq!(code, 0);
    assert!(err.contains("warning: 3 of 3 runs hit the cap"));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["capped"], 3);
    assert!(v["mean_days"].is_null());
}

#[test]
fn binary_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_dynepi");
    let out = Command::new(bin)
        .args(["puzzle", "cheryl"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "July 16\n");

    let out = Command::new(bin)
        .args(["check", "--model"])
        .arg(fixture("cheryl.model"))
        .args(["--formula", "Kv Bernard day", "--world", "June-18"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "true\n");

    let out = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
