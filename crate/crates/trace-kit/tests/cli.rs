//! End-to-end runs of the trace-kit binary: output shapes, the exit-code
//! contract, and the determinism digest.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

use trace_kit::constructions::build_construction_b;
use trace_kit::io::write_family;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn trace_kit(args: &[&str], envs: &[(&str, &str)]) -> Run {
    let output = Command::new(env!("CARGO_BIN_EXE_trace-kit"))
        .args(args)
        .envs(envs.iter().copied())
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(output.stdout).unwrap(),
        stderr: String::from_utf8(output.stderr).unwrap(),
        code: output.status.code().unwrap(),
    }
}

/// The manifest is the last stderr line.
fn manifest(run: &Run) -> Value {
    let line = run
        .stderr
        .lines()
        .rev()
        .find(|l| !l.trim().is_empty())
        .expect("manifest line");
    serde_json::from_str(line).expect("manifest JSON")
}

fn scrub_wallclock(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove("wallclock");
            map.values_mut().for_each(scrub_wallclock);
        }
        Value::Array(items) => items.iter_mut().for_each(scrub_wallclock),
        _ => {}
    }
}

#[test]
fn construct_b_emits_the_reference_family() {
    let run = trace_kit(
        &["construct", "--family", "b", "--n", "10", "--d", "5"],
        &[],
    );
    assert_eq!(run.code, 0, "{}", run.stderr);
    let value: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(value["family"]["sets"].as_array().unwrap().len(), 54);
    assert_eq!(value["report"]["size"], 54);
    assert_eq!(value["report"]["min_degree"], 12);
    assert_eq!(value["report"]["matches_formula"], true);
    let m = manifest(&run);
    assert_eq!(m["subcommand"], "construct");
    assert!(m["digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn search_is_deterministic_modulo_wallclock() {
    let args = ["search", "--n", "4", "--s", "1"];
    let first = trace_kit(&args, &[]);
    let second = trace_kit(&args, &[]);
    assert_eq!(first.code, 0);

    let mut a: Value = serde_json::from_str(&first.stdout).unwrap();
    let mut b: Value = serde_json::from_str(&second.stdout).unwrap();
    assert_eq!(a["m"], 6);
    assert_eq!(a["status"], "proved");
    scrub_wallclock(&mut a);
    scrub_wallclock(&mut b);
    assert_eq!(a, b);
    assert_eq!(manifest(&first)["digest"], manifest(&second)["digest"]);
}

#[test]
fn search_timeout_reports_honest_bounds() {
    let run = trace_kit(
        &["search", "--n", "10", "--s", "11"],
        &[("TRACEKIT_BUDGET_SECS", "0")],
    );
    assert_eq!(run.code, 1, "timeout is not a proof");
    let value: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(value["status"], "timeout");
    assert_eq!(value["m"], 53);
    assert_eq!(value["lower_bound"], 52);
    assert_eq!(value["witness"]["sets"].as_array().unwrap().len(), 54);
}

#[test]
fn budget_flag_overrides_environment() {
    // A generous explicit budget beats the hostile environment value.
    let run = trace_kit(
        &["search", "--n", "6", "--s", "3", "--budget", "60"],
        &[("TRACEKIT_BUDGET_SECS", "0")],
    );
    assert_eq!(run.code, 0);
    let value: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(value["m"], 14);
    assert_eq!(value["status"], "proved");
}

#[test]
fn verify_sniffs_both_family_formats() {
    let dir = tempfile::tempdir().unwrap();
    let family = build_construction_b(10, 5).unwrap();
    let json_path = dir.path().join("family.json");
    write_family(&json_path, &family).unwrap();
    let text_path = dir.path().join("family.txt");
    std::fs::write(&text_path, trace_kit::io::render_family_text(&family)).unwrap();

    let from_json = trace_kit(
        &[
            "verify",
            "--in",
            json_path.to_str().unwrap(),
            "--s",
            "11",
            "--ms",
            "53/10",
        ],
        &[],
    );
    let from_text = trace_kit(
        &[
            "verify",
            "--in",
            text_path.to_str().unwrap(),
            "--s",
            "11",
            "--ms",
            "53/10",
        ],
        &[],
    );
    assert_eq!(from_json.code, 0, "{}", from_json.stderr);
    assert_eq!(from_json.stdout, from_text.stdout);
    let value: Value = serde_json::from_str(&from_json.stdout).unwrap();
    assert_eq!(value["hereditary"], true);
    assert_eq!(value["extremal"]["matches_formula"], true);
}

#[test]
fn verify_flags_non_hereditary_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.txt");
    std::fs::write(&path, "n=3\n1 2\n").unwrap();
    let run = trace_kit(&["verify", "--in", path.to_str().unwrap()], &[]);
    assert_eq!(run.code, 1);
    let value: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(value["hereditary"], false);
}

#[test]
fn missing_file_is_a_usage_class_error_with_path() {
    let path = Path::new("/nonexistent/family.json");
    let run = trace_kit(&["verify", "--in", path.to_str().unwrap()], &[]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("/nonexistent/family.json"), "{}", run.stderr);
}

#[test]
fn unknown_subcommand_exits_2() {
    let run = trace_kit(&["frobnicate"], &[]);
    assert_eq!(run.code, 2);
}

#[test]
fn appendix_a_emits_csv_rows() {
    let run = trace_kit(&["appendix-a", "--from", "50", "--to", "52"], &[]);
    assert_eq!(run.code, 0);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines[0], "d,h,decimal,holds");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("50,") && lines[1].ends_with(",true"));
}

#[test]
fn piles_reports_block_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    write_family(&path, &build_construction_b(12, 6).unwrap()).unwrap();
    let run = trace_kit(
        &["piles", "--in", path.to_str().unwrap(), "--d", "6", "--c", "6"],
        &[],
    );
    assert_eq!(run.code, 0, "{}", run.stderr);
    let value: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(value["decomposition"]["piles"].as_array().unwrap().len(), 2);
    assert_eq!(value["projections"].as_array().unwrap().len(), 2);
    for projection in value["projections"].as_array().unwrap() {
        assert_eq!(projection["pile_weight"], projection["weight_target"]);
    }
}

#[test]
fn reproduce_small_m_passes_every_row() {
    let run = trace_kit(&["reproduce", "small-m"], &[]);
    assert_eq!(run.code, 0);
    let mut lines = run.stdout.lines();
    assert_eq!(lines.next(), Some("row,expected,actual,status"));
    for line in lines {
        assert!(line.ends_with(",pass"), "{line}");
    }
}
