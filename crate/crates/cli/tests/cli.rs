use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiverlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kv(o: &Output) -> Vec<(String, String)> {
    stdout(o)
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('=').expect("key=value line");
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn value(pairs: &[(String, String)], key: &str) -> String {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.clone())
        .unwrap_or_else(|| panic!("no key {key}"))
}

#[test]
fn kronecker_report() {
    let o = run(&[
        "report",
        &data("kronecker.q"),
        "--lambda",
        "0,0",
        "--alpha",
        "1,1",
        "--format",
        "kv",
    ]);
    assert!(o.status.success());
    let p = kv(&o);
    assert_eq!(value(&p, "nonempty"), "true");
    assert_eq!(value(&p, "dimension"), "2");
    assert_eq!(value(&p, "normal"), "true");
    assert_eq!(value(&p, "rational_singularities"), "true");
    assert_eq!(value(&p, "singularity"), "singular");

    let text = stdout(&run(&[
        "report",
        &data("kronecker.q"),
        "--lambda",
        "0,0",
        "--alpha",
        "1,1",
    ]));
    assert!(text
        .lines()
        .any(|l| l.starts_with("dimension") && l.ends_with(" 2")));
}

#[test]
fn kronecker_roots() {
    let o = run(&["roots", &data("kronecker.q"), "--bound", "2,2"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "(0,1) REAL 1");
    assert_eq!(lines[2], "(1,1) IMAG 0");
}

#[test]
fn empty_argv_prints_usage() {
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn parse_errors_exit_2() {
    let o = run(&["roots", &data("bad.q"), "--bound", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(
        run(&["roots", &data("missing.q"), "--bound", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["roots", &data("kronecker.q"), "--bound", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["sigma", &data("kronecker.q"), "--alpha", "1,1,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "roots",
            &data("kronecker.q"),
            "--bound",
            "1,1",
            "--frobnicate"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn domain_errors_exit_1() {
    let o = run(&[
        "solve",
        &data("kronecker.q"),
        "--alpha",
        "1,1",
        "--lambda",
        "1,1",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("lambda . alpha"));
    let o = run(&["kp", "star", &data("c1.cls"), &data("c_nilp.cls")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sigma_reports_violation() {
    let p = kv(&run(&[
        "sigma",
        &data("kronecker.q"),
        "--alpha",
        "2,2",
        "--format",
        "kv",
    ]));
    assert_eq!(value(&p, "in_r_lambda"), "true");
    assert_eq!(value(&p, "in_sigma"), "false");
    assert_eq!(value(&p, "violation"), "(1,1) + (1,1)");
    assert_eq!(value(&p, "dim"), "4");
}

#[test]
fn solve_is_reproducible() {
    let args = [
        "solve",
        &data("two_loops.q"),
        "--alpha",
        "2",
        "--seed",
        "11",
        "--format",
        "kv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let p = kv(&a);
    assert_eq!(value(&p, "tangent_dim"), "13");
    assert_eq!(value(&p, "predicted_dim"), "13");
    let residual: f64 = value(&p, "residual").parse().unwrap();
    assert!(residual <= 1e-10);
}

#[test]
fn darboux_extracts_kronecker() {
    let o = run(&["darboux", &data("kronecker.quad"), "--format", "kv"]);
    assert!(o.status.success());
    let p = kv(&o);
    assert_eq!(value(&p, "certified"), "true");
    assert_eq!(value(&p, "alpha"), "(1,1)");
    assert_eq!(value(&p, "lambda"), "(0,0)");
    assert_eq!(value(&p, "quiver.arrows").split(' ').count(), 2);
    assert_eq!(value(&p, "certificate.1").split(' ').count(), 4);
}

#[test]
fn kp_class_and_legs() {
    let p = kv(&run(&[
        "kp",
        "class",
        &data("c_nilp.cls"),
        "--format",
        "kv",
    ]));
    assert_eq!(value(&p, "class_dim"), "4");
    assert_eq!(value(&p, "two_p"), "4");
    assert_eq!(value(&p, "in_sigma"), "true");
    assert_eq!(value(&p, "alpha"), "(2,1)");

    let p = kv(&run(&[
        "kp",
        "star",
        &data("c1.cls"),
        &data("c1.cls"),
        "--format",
        "kv",
    ]));
    assert_eq!(value(&p, "trace_sum"), "2");
    assert_eq!(value(&p, "trace_condition"), "false");
    assert_eq!(value(&p, "nonempty"), "false");

    let o = run(&[
        "kp",
        "legs",
        &data("point.q"),
        &data("c_nilp.cls"),
        "--format",
        "kv",
    ]);
    assert!(o.status.success());
    assert_eq!(value(&kv(&o), "alpha"), "(3,2)");
}

#[test]
fn types_and_local() {
    let p = kv(&run(&[
        "types",
        &data("kronecker3.q"),
        "--alpha",
        "1,1",
        "--format",
        "kv",
    ]));
    assert_eq!(value(&p, "count"), "2");
    assert_eq!(value(&p, "type.2"), "(1,(1,0); 1,(0,1))");
    assert_eq!(value(&p, "type.2.dichotomy"), "(ii)");
    let p = kv(&run(&[
        "local",
        &data("kronecker3.q"),
        "--alpha",
        "1,1",
        "--type",
        "2",
        "--format",
        "kv",
    ]));
    assert_eq!(value(&p, "type.2.L.1"), "0 3");
    assert_eq!(
        run(&[
            "local",
            &data("kronecker3.q"),
            "--alpha",
            "1,1",
            "--type",
            "9"
        ])
        .status
        .code(),
        Some(2)
    );
}
