//! End-to-end tests of the `matroid-lab` binary: exit codes, report shapes,
//! and byte-level reproducibility of JSON reports.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matroid-lab"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("matroid-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command {args:?} failed: {}\n{}",
        stdout(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

#[test]
fn gen_writes_parseable_files() {
    let path = tmp("u24.matroid");
    run_ok(&["gen", "uniform", "2", "4", "-o", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).unwrap();
    let m = matroid_lab::io::parse_matroid(&text).unwrap();
    assert_eq!(m.size(), 4);
    assert_eq!(m.rank(), 2);
}

#[test]
fn gen_unknown_family_exits_2() {
    let out = bin().args(["gen", "dowling", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_vamos_report() {
    let path = tmp("v8.matroid");
    run_ok(&["gen", "vamos", "-o", path.to_str().unwrap()]);
    let text = run_ok(&["analyze", path.to_str().unwrap()]);
    assert!(text.contains("elements: 8   rank: 4"));
    assert!(text.contains("modular: no"));
    assert!(text.contains("hypermodular: no"));
    assert!(text.contains("bundle condition: violated"));
    assert!(text.contains("escher violations: 0"));
}

#[test]
fn analyze_raw_escher_table() {
    let table = matroid_lab::generators::escher_configuration_table();
    let text = matroid_lab::io::serialize_rank_table(&table, Some("figure-1"));
    let path = tmp("figure1.ranktable");
    std::fs::write(&path, text).unwrap();
    let report = run_ok(&["analyze", path.to_str().unwrap()]);
    assert!(report.contains("NOT A MATROID"));
    assert!(report.contains("escher violations: 1"));
}

#[test]
fn figure_one_pipeline_through_the_cli() {
    let u36 = tmp("u36.matroid");
    let n1 = tmp("n1.matroid");
    let n2 = tmp("n2.matroid");
    run_ok(&["gen", "uniform", "3", "6", "-o", u36.to_str().unwrap()]);
    run_ok(&[
        "extend",
        u36.to_str().unwrap(),
        "--flats",
        "a b; c d",
        "--label",
        "p",
        "-o",
        n1.to_str().unwrap(),
    ]);
    run_ok(&["gen", "figure1-erection", "-o", n2.to_str().unwrap()]);

    // expected failure certifies: exit 0 under --expect fails
    let out = bin()
        .args([
            "amalgam",
            n1.to_str().unwrap(),
            n2.to_str().unwrap(),
            "--expect",
            "fails",
            "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["results"]["status"], "fails");
    let v = &report["results"]["violation"];
    let lhs = v["xi_x"].as_u64().unwrap() + v["xi_y"].as_u64().unwrap();
    let rhs = v["xi_intersection"].as_u64().unwrap() + v["xi_union"].as_u64().unwrap();
    assert!(lhs < rhs);

    // asking for the opposite expectation is a domain-negative: exit 1
    let out = bin()
        .args([
            "amalgam",
            n1.to_str().unwrap(),
            n2.to_str().unwrap(),
            "--expect",
            "exists",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn amalgam_exists_writes_the_file() {
    let pg = tmp("pg32.matroid");
    run_ok(&["gen", "pg3", "2", "-o", pg.to_str().unwrap()]);
    let e1 = tmp("pg-e1.matroid");
    let e2 = tmp("pg-e2.matroid");
    run_ok(&[
        "extend",
        pg.to_str().unwrap(),
        "--flats",
        "1000",
        "--label",
        "x1",
        "-o",
        e1.to_str().unwrap(),
    ]);
    run_ok(&[
        "extend",
        pg.to_str().unwrap(),
        "--flats",
        "0100",
        "--label",
        "x2",
        "-o",
        e2.to_str().unwrap(),
    ]);
    let amalgam = tmp("pg-amalgam.matroid");
    let text = run_ok(&[
        "amalgam",
        e1.to_str().unwrap(),
        e2.to_str().unwrap(),
        "-o",
        amalgam.to_str().unwrap(),
        "--expect",
        "exists",
    ]);
    assert!(text.contains("proper amalgam: exists"));
    let m = matroid_lab::io::parse_matroid(&std::fs::read_to_string(&amalgam).unwrap()).unwrap();
    assert_eq!(m.size(), 17);
    assert_eq!(m.rank(), 4);
}

#[test]
fn certify_nonsticky_exit_codes() {
    let v8 = tmp("v8c.matroid");
    run_ok(&["gen", "vamos", "-o", v8.to_str().unwrap()]);
    let out = bin()
        .args(["certify-nonsticky", v8.to_str().unwrap(), "--auto-pair"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("certificate of non-stickiness produced"));

    let pg = tmp("pg32c.matroid");
    run_ok(&["gen", "pg3", "2", "-o", pg.to_str().unwrap()]);
    let out = bin()
        .args(["certify-nonsticky", pg.to_str().unwrap(), "--auto-pair"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("no intersectable non-modular pair"));
}

#[test]
fn isomorphic_exit_codes() {
    let a = tmp("iso-a.matroid");
    let b = tmp("iso-b.matroid");
    run_ok(&["gen", "uniform", "2", "4", "-o", a.to_str().unwrap()]);
    run_ok(&["gen", "uniform", "3", "6", "-o", b.to_str().unwrap()]);
    let same = bin()
        .args(["isomorphic", a.to_str().unwrap(), a.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(same.status.code(), Some(0));
    let diff = bin()
        .args(["isomorphic", a.to_str().unwrap(), b.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(diff.status.code(), Some(1));
}

#[test]
fn json_reports_are_byte_identical() {
    let v8 = tmp("v8j.matroid");
    run_ok(&["gen", "vamos", "-o", v8.to_str().unwrap()]);
    let a = run_ok(&["analyze", v8.to_str().unwrap(), "--json", "--seed", "7"]);
    let b = run_ok(&["analyze", v8.to_str().unwrap(), "--json", "--seed", "7"]);
    assert_eq!(a, b);
    assert!(a.contains("\"sha256\""));
}

#[test]
fn selftest_single_criterion() {
    let text = run_ok(&["selftest", "--criterion", "3"]);
    assert!(text.contains("criterion  3 [PASS]"));
    assert!(text.contains("all criteria passed"));
}

#[test]
fn malformed_file_exits_2() {
    let path = tmp("broken.matroid");
    std::fs::write(&path, "elements: a b\nrepresentation: flats\nnot a record\n").unwrap();
    let out = bin().args(["analyze", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn embed_ote_rank4_via_cli_roundtrip() {
    // PG(3,2) is already OTE: the rank-4 embedding is a no-op
    let pg = tmp("pg32e.matroid");
    run_ok(&["gen", "pg3", "2", "-o", pg.to_str().unwrap()]);
    let log = tmp("pg32e.log.json");
    let text = run_ok(&[
        "embed-ote",
        pg.to_str().unwrap(),
        "--rank4",
        "--log",
        log.to_str().unwrap(),
    ]);
    assert!(text.contains("0 extension step(s)"));
    let log_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&log).unwrap()).unwrap();
    assert_eq!(log_json["status"], "complete");
    assert_eq!(log_json["checks"]["ote"], true);
}

#[test]
fn thread_count_does_not_change_results() {
    let pg = tmp("pg32t.matroid");
    run_ok(&["gen", "pg3", "2", "-o", pg.to_str().unwrap()]);
    let e1 = tmp("pg-t1.matroid");
    let e2 = tmp("pg-t2.matroid");
    run_ok(&[
        "extend", pg.to_str().unwrap(), "--flats", "1000",
        "--label", "x1", "-o", e1.to_str().unwrap(),
    ]);
    run_ok(&[
        "extend", pg.to_str().unwrap(), "--flats", "0100",
        "--label", "x2", "-o", e2.to_str().unwrap(),
    ]);
    let run_with = |threads: &str| -> serde_json::Value {
        let out = run_ok(&[
            "amalgam", e1.to_str().unwrap(), e2.to_str().unwrap(),
            "--json", "--threads", threads,
        ]);
        let report: serde_json::Value = serde_json::from_str(&out).unwrap();
        report["results"].clone()
    };
    assert_eq!(run_with("1"), run_with("4"));
}
