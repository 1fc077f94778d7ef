//! Exercising the binary the way a user would: files in, reports out,
//! exit codes matching the documented meanings.

use std::path::PathBuf;
use std::process::Command;

use hyperspec_core::Hypergraph;

fn tmp() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("behavior");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperspec"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn get<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("missing key {key} in:\n{report}"))
}

#[test]
fn construct_writes_the_advertised_file() {
    let out = tmp().join("t633.hgr");
    let (report, _, code) = run(&[
        "construct", "turan", "--n", "6", "--k", "3", "--r", "3", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(get(&report, "graph.edges"), "8");
    let written = std::fs::read_to_string(&out).unwrap();
    let h = Hypergraph::from_hgr(&written).unwrap();
    assert_eq!(h.n_edges(), 8);
    assert_eq!(h.to_hgr(), written);
}

#[test]
fn expansion_construction_counts() {
    let out = tmp().join("k4exp.hgr");
    let (report, _, code) = run(&[
        "construct", "expansion", "--clique", "4", "--r", "3", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(get(&report, "graph.vertices"), "10");
    assert_eq!(get(&report, "graph.edges"), "6");
}

#[test]
fn join_of_mismatched_uniformities_is_an_input_error() {
    let a = tmp().join("a3.hgr");
    let b = tmp().join("b4.hgr");
    std::fs::write(&a, Hypergraph::complete(4, 3).unwrap().to_hgr()).unwrap();
    std::fs::write(&b, Hypergraph::complete(5, 4).unwrap().to_hgr()).unwrap();
    let (_, err, code) = run(&[
        "construct", "join", a.to_str().unwrap(), b.to_str().unwrap(), "--out",
        tmp().join("j.hgr").to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "stderr: {err}");
    assert!(!err.is_empty());
}

#[test]
fn check_reports_witnesses_for_found_patterns() {
    let g = tmp().join("k63.hgr");
    std::fs::write(&g, Hypergraph::complete(6, 3).unwrap().to_hgr()).unwrap();
    let (report, _, code) = run(&[
        "check", g.to_str().unwrap(), "--pattern", "family:4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(get(&report, "free"), "false");
    assert_eq!(get(&report, "witness.core"), "0 1 2 3");

    let t = tmp().join("t633_check.hgr");
    std::fs::write(&t, Hypergraph::turan(6, 3, 3).unwrap().to_hgr()).unwrap();
    let (report, _, code) = run(&["check", t.to_str().unwrap(), "--pattern", "family:4"]);
    assert_eq!(code, 0);
    assert_eq!(get(&report, "free"), "true");
}

#[test]
fn spectral_report_redirects_with_out() {
    let g = tmp().join("k33_out.hgr");
    std::fs::write(&g, Hypergraph::complete(3, 3).unwrap().to_hgr()).unwrap();
    let report_path = tmp().join("report.txt");
    let (stdout, err, code) = run(&[
        "spectral", g.to_str().unwrap(), "--p", "3", "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert!(err.contains("wall_time_ms"));
    let report = std::fs::read_to_string(&report_path).unwrap();
    let lambda: f64 = get(&report, "lambda").parse().unwrap();
    assert!((lambda - 2.0).abs() < 1e-8);
    assert_eq!(get(&report, "converged"), "true");
    assert!(report.contains("sha256:"), "input digest missing:\n{report}");
}

#[test]
fn spectral_requires_an_exponent_or_the_simplex_flag() {
    let g = tmp().join("k33_flagless.hgr");
    std::fs::write(&g, Hypergraph::complete(3, 3).unwrap().to_hgr()).unwrap();
    let (_, err, code) = run(&["spectral", g.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("--p") || err.contains("lagrangian"), "stderr: {err}");
}

#[test]
fn missing_input_file_is_an_input_error() {
    let (_, err, code) = run(&["spectral", "no_such_file.hgr", "--p", "2"]);
    assert_eq!(code, 3);
    assert!(err.contains("no_such_file.hgr"));
}

#[test]
fn lab_caps_exit_with_the_cap_code() {
    let (_, _, code) = run(&["lab", "max-edges", "--n", "9", "--r", "3"]);
    assert_eq!(code, 4);
    let g = tmp().join("probe_radius.hgr");
    std::fs::write(&g, Hypergraph::complete(4, 3).unwrap().to_hgr()).unwrap();
    let (_, _, code) = run(&[
        "lab", "probe", g.to_str().unwrap(), "--pattern", "none", "--p", "3",
        "--radius", "5",
    ]);
    assert_eq!(code, 4);
}

#[test]
fn stability_derives_epsilon_when_not_given() {
    let t = tmp().join("t933.hgr");
    std::fs::write(&t, Hypergraph::turan(9, 3, 3).unwrap().to_hgr()).unwrap();
    let (report, _, code) = run(&["stability", t.to_str().unwrap(), "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(get(&report, "closeness.distance"), "0");
    assert_eq!(get(&report, "epsilon.source"), "derived-from-closeness");
    assert_eq!(get(&report, "partition.bad"), "0");
    assert_eq!(get(&report, "partition.class_sizes"), "3 3 3");
}

#[test]
fn lab_witness_files_round_trip() {
    let dir = tmp().join("witnesses");
    let (report, _, code) = run(&[
        "lab", "max-edges", "--n", "5", "--r", "3", "--pattern", "family:4",
        "--witness-dir", dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let first = get(&report, "witness.0");
    let text = std::fs::read_to_string(first).unwrap();
    let w = Hypergraph::from_hgr(&text).unwrap();
    assert_eq!(w.n_edges() as f64, get(&report, "best_value").parse::<f64>().unwrap());
}

#[test]
fn jobs_env_var_is_honored_and_validated() {
    let g = tmp().join("k33_jobs.hgr");
    std::fs::write(&g, Hypergraph::complete(3, 3).unwrap().to_hgr()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hyperspec"))
        .args(["spectral", g.to_str().unwrap(), "--p", "2"])
        .env("HYPERSPEC_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = String::from_utf8(out.stdout).unwrap();
    assert_eq!(get(&report, "manifest.jobs"), "2");

    let out = Command::new(env!("CARGO_BIN_EXE_hyperspec"))
        .args(["spectral", g.to_str().unwrap(), "--p", "2"])
        .env("HYPERSPEC_JOBS", "soon")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
