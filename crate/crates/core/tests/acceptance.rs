//! Acceptance suite: one test per criterion, printing a pass/fail line.
//!
//! The same checks back the CLI `selftest` subcommand; here each criterion
//! is asserted so `cargo test` fails when any of them regresses.

use matroid_lab::acceptance::{run_criterion, CRITERIA};

fn run(id: usize) {
    let result = run_criterion(id, 1);
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_01_axiom_suite() {
    run(1);
}

#[test]
fn criterion_02_escher() {
    run(2);
}

#[test]
fn criterion_03_crapo_bijection() {
    run(3);
}

#[test]
fn criterion_04_modular_sticky() {
    run(4);
}

#[test]
fn criterion_05_figure_one_non_amalgam() {
    run(5);
}

#[test]
fn criterion_06_witness_invariants() {
    run(6);
}

#[test]
fn criterion_07_xi_oracle_equivalence() {
    run(7);
}

#[test]
fn criterion_08_eta_violation_anatomy() {
    run(8);
}

#[test]
fn criterion_09_embedding() {
    run(9);
}

#[test]
fn criterion_10_nonstickiness_pipeline() {
    run(10);
}

#[test]
fn criterion_11_bundle_and_ote() {
    run(11);
}

#[test]
fn criteria_table_is_complete() {
    assert_eq!(CRITERIA.len(), 11);
    assert!(CRITERIA.iter().map(|(i, _)| *i).eq(1..=11));
}
