//! End-to-end runs of the compiled binary: tables, scans, exit codes,
//! output formats, and registry overrides.

use std::io::Write;
use std::process::{Command, Output};

fn rovib() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rovib"));
    c.env_remove("ROVIB_REGISTRY");
    c
}

fn run(args: &[&str]) -> Output {
    rovib().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

fn exit_code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

/// Data rows of a CSV body (header skipped), split into cells.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column_index(text: &str, name: &str) -> usize {
    text.lines()
        .next()
        .expect("header")
        .split(',')
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("column {name} missing"))
}

#[test]
fn table2_matches_published_ground_states() {
    let out = run(&["table2"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let col = column_index(&text, "energy_cm1");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 4);
    let expected = [2168.68, 2164.45, 2157.53, 2147.53];
    for (row, want) in rows.iter().zip(expected) {
        let got: f64 = row[col].parse().unwrap();
        assert!((got - want).abs() < 0.02, "{got} vs {want}");
    }
}

#[test]
fn levels_h2_first_excited() {
    let out = run(&["levels", "--molecule", "H2", "--n", "1", "--l", "0"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("n,l,energy_cm1,regime,coeffs,residual"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let e: f64 = rows[0][2].parse().unwrap();
    assert!((e - 6306.66).abs() < 0.1, "E(1,0) = {e}");
    assert_eq!(rows[0][3], "nr");
    assert_eq!(rows[0][4], "-");
}

#[test]
fn levels_emit_both_coefficient_variants() {
    let out = run(&[
        "levels",
        "--molecule",
        "Ar2",
        "--n",
        "1",
        "--l",
        "1",
        "--coeffs",
        "both",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    let labels: Vec<&str> = rows.iter().map(|r| r[4].as_str()).collect();
    assert!(labels.contains(&"matched") && labels.contains(&"paper"), "{labels:?}");
    let matched = rows.iter().find(|r| r[4] == "matched").unwrap();
    let e: f64 = matched[2].parse().unwrap();
    assert!((e - 25.7584).abs() < 1.0, "E(1,1) matched = {e}");
}

#[test]
fn unknown_molecule_is_exit_three() {
    let out = run(&["levels", "--molecule", "Xe9"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stderr(&out).contains("error"));
}

#[test]
fn empty_range_is_usage_error() {
    let out = run(&["levels", "--molecule", "H2", "--l", "2..1"]);
    assert_eq!(exit_code(&out), 64);
}

#[test]
fn scan_n_walks_the_full_ladder() {
    let out = run(&["scan-n", "--molecule", "Ar2"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stderr(&out).is_empty());
    let text = stdout(&out);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 7);
    let energies: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    for pair in energies.windows(2) {
        assert!(pair[0] < pair[1]);
    }
    assert!(*energies.last().unwrap() <= 99.55);
}

#[test]
fn scan_n_truncates_with_warning() {
    let out = run(&["scan-n", "--molecule", "Ar2", "--n", "9"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stderr(&out).contains("warning"), "stderr: {}", stderr(&out));
    assert_eq!(csv_rows(&stdout(&out)).len(), 7);
}

#[test]
fn scan_de_single_point_matches_levels_output() {
    let scan = run(&[
        "scan-de",
        "--molecule",
        "Ar2",
        "--de-min",
        "99.55",
        "--de-max",
        "99.55",
        "--de-steps",
        "1",
        "--precision",
        "10",
    ]);
    assert_eq!(exit_code(&scan), 0);
    let scan_text = stdout(&scan);
    let scan_rows = csv_rows(&scan_text);
    assert_eq!(scan_rows.len(), 1);
    let levels = run(&[
        "levels",
        "--molecule",
        "Ar2",
        "--n",
        "0",
        "--l",
        "0",
        "--precision",
        "10",
    ]);
    let levels_text = stdout(&levels);
    let e_col = column_index(&levels_text, "energy_cm1");
    let scan_col = column_index(&scan_text, "energy_cm1");
    assert_eq!(scan_rows[0][scan_col], csv_rows(&levels_text)[0][e_col]);
}

#[test]
fn scan_de_zero_steps_is_usage_error() {
    let out = run(&[
        "scan-de",
        "--molecule",
        "Ar2",
        "--de-steps",
        "0",
    ]);
    assert_eq!(exit_code(&out), 64);
}

#[test]
fn json_lines_mirror_csv_columns() {
    let out = run(&["table3", "--format", "json-lines"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    for line in &lines {
        assert!(line.starts_with("{\"n\":"), "line: {line}");
        assert!(line.contains("\"transition_cm1\":"));
        assert!(line.ends_with('}'));
        // Numeric fields stay unquoted.
        let after = line.split("\"transition_cm1\":").nth(1).unwrap();
        assert!(!after.trim_start().starts_with('"'));
    }
}

#[test]
fn output_bytes_are_deterministic() {
    let a = run(&["table4", "--exec", "parallel"]);
    let b = run(&["table4", "--exec", "sequential"]);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["table4", "--exec", "parallel"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t3.csv");
    let filed = rovib()
        .args(["table3", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&filed), 0);
    assert!(stdout(&filed).is_empty());
    let direct = run(&["table3"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

fn write_registry(content: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("registry.ini");
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    let p = path.to_str().unwrap().to_string();
    (dir, p)
}

#[test]
fn registry_overlay_adds_a_molecule() {
    let (_dir, path) = write_registry(
        "[XeLite]\n\
         de_cm = 120.0\n\
         re_angstrom = 3.2\n\
         mu_amu = 30.0\n\
         sigma = 20.0\n\
         delta = 40.0\n\
         alpha_inv_angstrom = 0.7\n\
         q = 1.0\n\
         branch = plus\n",
    );
    let out = rovib()
        .env("ROVIB_REGISTRY", &path)
        .args(["levels", "--molecule", "XeLite", "--n", "0", "--l", "0"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(csv_rows(&stdout(&out)).len(), 1);
}

#[test]
fn perturbed_registry_fails_validation() {
    // Same H2 shape but the well 10% deeper: golden tables cannot match.
    let (_dir, path) = write_registry(
        "[H2]\n\
         de_cm = 42109.1\n\
         re_angstrom = 0.7414\n\
         mu_amu = 0.50407\n\
         sigma = 426.826\n\
         delta = 463.102\n\
         alpha_inv_angstrom = 0.9327\n\
         q = 1.0\n\
         branch = plus\n",
    );
    let out = rovib()
        .env("ROVIB_REGISTRY", &path)
        .args(["validate", "--skip-oracle"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("fail"));
}

#[test]
fn validate_skip_oracle_passes_clean() {
    let out = run(&["validate", "--skip-oracle"]);
    assert_eq!(exit_code(&out), 0, "stdout: {}\nstderr: {}", stdout(&out), stderr(&out));
    let text = stdout(&out);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 11);
    for row in &rows {
        assert_eq!(row[2], "pass", "{row:?}");
    }
}

#[test]
fn wavefunction_samples_are_finite() {
    let out = run(&[
        "wavefunction",
        "--molecule",
        "H2",
        "--samples",
        "5",
        "--r-min",
        "0.5",
        "--r-max",
        "1.1",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("r_angstrom,radial"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 0.5);
    assert_eq!(rows[4][0].parse::<f64>().unwrap(), 1.1);
    for row in &rows {
        let v: f64 = row[1].parse().unwrap();
        assert!(v.is_finite() && v > 0.0, "{row:?}");
    }
}
