//! End-to-end gate: every release-blocking check, one test per check.
//! Each test prints its pass/fail line so the summary reads as a report.

use rovib::registry::builtin_registry;
use rovib::validate::{self, CheckResult};
use rovib::ExecMode;

fn assert_check(r: CheckResult) {
    let status = if r.passed { "pass" } else { "FAIL" };
    println!("check {:02} [{status}] {}: {}", r.id, r.label, r.detail);
    assert!(r.passed, "check {:02} {} failed: {}", r.id, r.label, r.detail);
}

#[test]
fn check_01_fit_variant_ground_states() {
    assert_check(validate::check_fit_variant_ground_states(&builtin_registry()));
}

#[test]
fn check_02_s_wave_transitions() {
    assert_check(validate::check_s_wave_transitions(&builtin_registry()));
}

#[test]
fn check_03_spectrum_extent() {
    assert_check(validate::check_spectrum_extent(&builtin_registry()));
}

#[test]
fn check_04_vibrational_columns() {
    assert_check(validate::check_vibrational_columns(&builtin_registry()));
}

#[test]
fn check_05_rotational_vs_oracle() {
    assert_check(validate::check_rotational_vs_oracle(
        &builtin_registry(),
        ExecMode::Parallel,
    ));
}

#[test]
fn check_06_s_wave_exactness() {
    assert_check(validate::check_s_wave_exactness(
        &builtin_registry(),
        ExecMode::Parallel,
    ));
}

#[test]
fn check_07_relativistic_limit() {
    assert_check(validate::check_relativistic_limit(&builtin_registry()));
}

#[test]
fn check_08_normalization() {
    assert_check(validate::check_normalization(&builtin_registry()));
}

#[test]
fn check_09_special_functions() {
    assert_check(validate::check_special_functions());
}

#[test]
fn check_10_node_counts() {
    assert_check(validate::check_node_counts(&builtin_registry()));
}

#[test]
fn check_11_figure_scans() {
    assert_check(validate::check_figure_scans(&builtin_registry()));
}
