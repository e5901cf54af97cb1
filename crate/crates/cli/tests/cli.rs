use std::path::PathBuf;
use std::process::{Command, Output};

use hcyc::Report;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn hcyc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcyc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Report {
    let out = hcyc(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn dims(r: &Report, table: &str) -> Vec<(Vec<i64>, usize, bool)> {
    r.find_table(table)
        .unwrap_or_else(|| panic!("no table {table}"))
        .rows
        .iter()
        .map(|row| (row.index.clone(), row.dim, row.certified))
        .collect()
}

#[test]
fn hochschild_of_matrices() {
    let r = report(&["hh", "--algebra", &fixture("m2.json"), "--max-degree", "5"]);
    let rows = dims(&r, "HH");
    assert_eq!(rows[0], (vec![0], 1, true));
    for (n, row) in rows.iter().enumerate().take(5).skip(1) {
        assert_eq!(*row, (vec![n as i64], 0, true));
    }
    assert_eq!(r.config["max_degree"], 5);
    assert_eq!(r.seed, 0);
}

#[test]
fn twisted_sphere_vanishes() {
    let r = report(&[
        "twisted",
        "--cdga",
        &fixture("s3.json"),
        "--twist",
        "x3",
        "--window",
        "6",
    ]);
    let rows = dims(&r, "H_twisted");
    let certified: Vec<_> = rows.iter().filter(|r| r.2).collect();
    assert!(certified.len() >= 10);
    assert!(certified.iter().all(|r| r.1 == 0));
}

#[test]
fn dd_on_the_sphere_reports_class_and_cocycle_flags() {
    let r = report(&[
        "dd",
        "--nerve",
        &fixture("boundary_delta4.json"),
        "--cocycle",
        &fixture("heisenberg3.json"),
        "--samples",
        "4",
    ]);
    assert!(r.facts.contains_key("class"));
    let t = r.tallies.iter().find(|t| t.name == "delta_n_zero").unwrap();
    assert_eq!((t.passed, t.failed), (1, 0));
    assert_eq!(r.failures(), 0);
}

#[test]
fn class_compare_of_trivial_and_heisenberg() {
    let r = report(&[
        "class-compare",
        "--nerve",
        &fixture("boundary_delta4.json"),
        "--first",
        &fixture("heisenberg3.json"),
        "--second",
        &fixture("trivial3.json"),
    ]);
    assert_eq!(r.facts["equal"].value, true);
}

#[test]
fn broken_associativity_exits_one_naming_the_triple() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"labels": ["a", "b"], "products": [[0, 0, [[1, 1, 1]]], [1, 0, [[0, 1, 1]]]]}"#,
    )
    .unwrap();
    let out = hcyc(&["hh", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("triple (0, 0, 0)"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"labels": ["a"], "products": [[0, 3, []]]}"#).unwrap();
    let out = hcyc(&["hh", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("products[0]"));
}

#[test]
fn broken_transition_data_is_a_domain_violation() {
    let out = hcyc(&[
        "dd",
        "--nerve",
        &fixture("triangle.json"),
        "--cocycle",
        &fixture("broken_triangle3.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("g_01 g_12"));
}

#[test]
fn resource_cap_exits_two() {
    let out = hcyc(&[
        "hh",
        "--algebra",
        &fixture("m2.json"),
        "--max-degree",
        "9",
        "--cap",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn report_round_trips() {
    let out = hcyc(&["hc", "--algebra", &fixture("c.json"), "--max-degree", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let r = Report::from_json(&text).unwrap();
    assert_eq!(r.to_json().unwrap(), text);
    let hc: Vec<usize> = dims(&r, "HC").iter().filter(|x| x.2).map(|x| x.1).collect();
    assert_eq!(hc, [1, 0, 1, 0, 1, 0, 1]);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.txt");
    let out = hcyc(&[
        "hh",
        "--algebra",
        &fixture("c.json"),
        "--max-degree",
        "1",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains("\nHH\n"));
}

#[test]
fn seeded_runs_are_identical() {
    let args = [
        "jlo",
        "--cdga",
        &fixture("t3_transgression.json"),
        "--phi=-f",
        "--samples",
        "4",
        "--seed",
        "17",
    ];
    let a = hcyc(&args);
    let b = hcyc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = Report::from_json(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(r.seed, 17);
    assert_eq!(r.failures(), 0);
}

#[test]
fn zero_cap_is_rejected() {
    assert_eq!(
        hcyc(&["hh", "--algebra", &fixture("c.json"), "--cap", "0"])
            .status
            .code(),
        Some(1)
    );
}
