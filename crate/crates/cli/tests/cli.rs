use std::path::PathBuf;
use std::process::{Command, Output};

use dilations_cli::Envelope;

fn dilate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilate")).args(args).output().expect("binary runs")
}

fn envelope(out: &Output) -> Envelope {
    serde_json::from_slice(&out.stdout).expect("stdout is an envelope")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dilate-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hua_gauss_sum_ratio_is_one() {
    let out = dilate(&["diagnostics", "hua", "--poly", "r^2", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let env = envelope(&out);
    assert_eq!(env.ratios["ratio"], "1.00000000000");
}

#[test]
fn density_reports_a_hole() {
    let pts = scratch("two.txt", "# two points\n0 0\n1/2 1/2\n");
    let out = dilate(&["density", "--points", path(&pts), "--eps", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let env = envelope(&out);
    assert_eq!(env.verdict, "not_dense");
    assert!(env.witnesses["hole"].is_array());
    let out_of_range = dilate(&["density", "--points", path(&pts), "--eps", "1/2"]);
    assert_eq!(out_of_range.status.code(), Some(2));
    let grid = scratch("grid.txt", "0 0\n0 1/2\n1/2 0\n1/2 1/2\n");
    assert_eq!(envelope(&dilate(&["density", "--points", path(&grid), "--eps", "1/4"])).verdict, "dense");
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["gen", "random", "--dim", "3", "--count", "15", "--seed", "11"];
    let a = dilate(&args);
    let b = dilate(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = dilate(&["gen", "random", "--dim", "3", "--count", "15", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn reports_round_trip() {
    let m = scratch("shift.txt", "2 2 1\n0 0\n0 1\n1 0\n0 1\n");
    let runs = [
        dilate(&["check-conditions", "--matrix", path(&m)]),
        dilate(&["decompose", "--matrix", path(&m)]),
        dilate(&["diagnostics", "exponents", "--n", "3", "--l", "2", "--d", "2"]),
        dilate(&["diagnostics", "weyl", "--coeffs", "0,1/5"]),
        dilate(&["gen", "farey", "--m", "3"]),
    ];
    for out in &runs {
        let env = envelope(out);
        let text = serde_json::to_string_pretty(&env).unwrap();
        assert_eq!(serde_json::from_str::<Envelope>(&text).unwrap(), env);
        assert_eq!(text.trim_end(), String::from_utf8_lossy(&out.stdout).trim_end());
    }
}

#[test]
fn condition_checks_on_the_examples() {
    let m1 = scratch("ex1.txt", "2 2 1\n0 0\n0 0\n1 0\n0 0\n");
    assert_eq!(envelope(&dilate(&["check-conditions", "--matrix", path(&m1)])).verdict, "condition_a_fails");
    let m2 = scratch("ex2.txt", "2 2 1\n0 0\n0 1\n1 0\n0 1\n");
    let env = envelope(&dilate(&["check-conditions", "--matrix", path(&m2)]));
    assert_eq!(env.verdict, "condition_b_fails");
    assert_eq!(env.witnesses["witness_verified"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(dilate(&["density", "--points", "/nonexistent", "--eps", "1/4"]).status.code(), Some(2));
    assert_eq!(dilate(&["diagnostics", "hua", "--poly", "r^2", "--q", "5", "--bogus"]).status.code(), Some(2));
    assert_eq!(dilate(&["diagnostics", "weyl", "--coeffs", "1/2.5"]).status.code(), Some(2));
    let one = scratch("one.txt", "1/3\n");
    let out = dilate(&["glasner-scan", "--points", path(&one), "--eps", "49/100", "--nmax", "20"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(envelope(&out).verdict, "exhausted");

    let m2 = scratch("ex2b.txt", "2 2 1\n0 0\n0 1\n1 0\n0 1\n");
    let p2 = scratch("diag.txt", "1/2 1/2\n1/3 1/3\n");
    let refused = dilate(&["search", "--matrix", path(&m2), "--points", path(&p2), "--eps", "1/4"]);
    assert_eq!(refused.status.code(), Some(2));
    assert_eq!(envelope(&refused).verdict, "condition_violated");
}

#[test]
fn generators_record_their_parameters() {
    let env = envelope(&dilate(&["gen", "example1", "--count", "1"]));
    assert_eq!(env.inputs["count"], 1);
    assert_eq!(env.witnesses["points"], 1);
    assert_eq!(env.verdict, "condition_violated");
    let farey = envelope(&dilate(&["gen", "farey", "--m", "5", "--n", "2", "--l", "1", "--nmax", "1"]));
    assert_eq!(farey.witnesses["points"], 100);
    assert_eq!(farey.witnesses["avoided_cube"]["delta"], "1/5");
}

#[test]
fn written_files_feed_back_in() {
    let dir = std::env::temp_dir().join(format!("dilate-cli-files-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (m, p) = (dir.join("m.txt"), dir.join("p.txt"));
    let gen = dilate(&["gen", "example2", "--count", "5", "--out-matrix", path(&m), "--out-points", path(&p)]);
    assert_eq!(gen.status.code(), Some(0));
    let out = dilate(&["structure", "--points", path(&p), "--w", "1,-1"]);
    let env = envelope(&out);
    assert_eq!(env.witnesses["verified"], true);
    assert_eq!(env.ratios["fraction"], "1.00000000000");
    let csv = dilate(&["--format", "csv", "check-conditions", "--matrix", path(&m)]);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("field,value\n"));
}

#[test]
fn timing_is_opt_in() {
    let plain = envelope(&dilate(&["diagnostics", "exponents", "--n", "1", "--l", "1", "--d", "1"]));
    assert!(plain.timing.is_none());
    let timed = envelope(&dilate(&["--timing", "diagnostics", "exponents", "--n", "1", "--l", "1", "--d", "1"]));
    assert!(timed.timing.is_some());
}
