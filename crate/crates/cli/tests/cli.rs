use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use graphpde::{graph_file, solution_file};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphpde"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn records(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("jsonl line"))
        .collect()
}

fn of_kind<'a>(recs: &'a [Value], kind: &str) -> Vec<&'a Value> {
    recs.iter().filter(|r| r["record"] == kind).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn check_on_three_path_succeeds() {
    let g = data("path3.graph");
    let o = run(&["check", p(&g), "--h0", "1", "--format", "jsonl"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs = records(&o);
    let eig = of_kind(&recs, "eigen");
    assert!((eig[0]["lambda1"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn solve_writes_mountain_pass_solution() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.txt");
    let g = data("path3.graph");
    let o = run(&[
        "solve",
        p(&g),
        "--nl",
        "power:p=4",
        "--theta",
        "4",
        "--M",
        "1",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("u b 1.4142135623"), "{text}");
    let gf = graph_file::parse(&std::fs::read_to_string(&g).unwrap()).unwrap();
    let back = solution_file::read(&gf.graph, &text).unwrap();
    assert_eq!(back.len(), 1);
    assert!((back[0][1] - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!((back[0][0], back[0][2]), (0.0, 0.0));
}

#[test]
fn solve2_finds_one_solution_in_ball() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.txt");
    let g = data("path3.graph");
    let o = run(&[
        "solve2",
        p(&g),
        "--nl",
        "power_plus_const:p=4,eps=0.1",
        "--rho",
        "1",
        "--h0",
        "1",
        "--out",
        p(&out),
        "--format",
        "jsonl",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs = records(&o);
    let sols = of_kind(&recs, "solution");
    assert_eq!(sols.len(), 2);
    let inside: Vec<bool> = sols
        .iter()
        .map(|s| s["in_ball"].as_bool().unwrap())
        .collect();
    assert_eq!(inside, [true, false]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.matches("# solution").count(), 2);
    assert!(text.contains("in_ball=true") && text.contains("in_ball=false"));
}

#[test]
fn solve2_on_grid() {
    let g = data("grid6.graph");
    let o = run(&[
        "solve2",
        p(&g),
        "--nl",
        "power_plus_const:p=4,eps=0.01",
        "--rho",
        "0.3",
        "--format",
        "jsonl",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs = records(&o);
    let kinds: Vec<&str> = of_kind(&recs, "solution")
        .iter()
        .map(|s| s["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["ball_min", "mountain_pass"]);
}

#[test]
fn jsonl_covers_every_report_field() {
    let g = data("path3.graph");
    let o = run(&["solve", p(&g), "--nl", "power:p=4", "--format", "jsonl"]);
    assert_eq!(code(&o), 0);
    let recs = records(&o);
    for kind in [
        "meta",
        "config",
        "verdict",
        "constants",
        "endpoint",
        "solution",
        "trace",
        "summary",
    ] {
        assert!(!of_kind(&recs, kind).is_empty(), "missing {kind} record");
    }
    let sol = of_kind(&recs, "solution")[0];
    for key in [
        "kind",
        "phi",
        "grad_norm",
        "residual_max",
        "h_norm",
        "in_ball",
        "rho",
        "converged",
        "newton_iterations",
        "tikhonov_shift",
        "weak_residual_max",
        "values",
    ] {
        assert!(sol.get(key).is_some(), "solution lacks {key}");
    }
    let summary = of_kind(&recs, "summary")[0];
    assert!(summary.get("ps_diagnostic").is_some() && summary.get("lambda1").is_some());
}

#[test]
fn text_matches_json_to_twelve_digits() {
    let g = data("path3.graph");
    let json = run(&["solve", p(&g), "--nl", "power:p=4", "--format", "jsonl"]);
    let text = run(&["solve", p(&g), "--nl", "power:p=4"]);
    assert_eq!((code(&json), code(&text)), (0, 0));
    let recs = records(&json);
    let sol = of_kind(&recs, "solution")[0];
    let text = String::from_utf8(text.stdout).unwrap();
    let phi_line = text
        .lines()
        .skip_while(|l| *l != "[solution]")
        .find(|l| l.trim_start().starts_with("phi:"))
        .expect("solution phi line");
    let shown: f64 = phi_line.split(':').nth(1).unwrap().trim().parse().unwrap();
    let exact = sol["phi"].as_f64().unwrap();
    assert!(
        (shown - exact).abs() <= 1e-11 * exact.abs(),
        "{shown} vs {exact}"
    );
}

#[test]
fn path_profile_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("path.csv");
    let g = data("grid6.graph");
    let o = run(&[
        "solve",
        p(&g),
        "--nl",
        "power:p=4",
        "--emit-path-profile",
        p(&csv),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("snapshot,iteration,s,phi"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert!(!rows.is_empty());
    assert!(rows
        .iter()
        .all(|r| r.len() == 4 && (0.0..=1.0).contains(&r[2]) && r[3].is_finite()));
}

#[test]
fn exit_codes() {
    let g = data("path3.graph");
    let g = p(&g);
    // f(x,0) = 0 makes the ball stage impossible
    assert_eq!(
        code(&run(&["solve2", g, "--nl", "power:p=4", "--rho", "1"])),
        1
    );
    assert_eq!(
        code(&run(&[
            "solve2",
            g,
            "--nl",
            "power_plus_const:p=4,eps=0.1",
            "--rho",
            "1",
            "--M0",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&run(&["solve2", g, "--nl", "power_plus_const:p=4,eps=0.1"])),
        2
    );
    assert_eq!(code(&run(&["eigen", g, "--nl", "power:p=4"])), 2);
    assert_eq!(code(&run(&["solve", g, "--nl", "cubic:p=3"])), 2);
    assert_eq!(
        code(&run(&["solve", "/nonexistent.graph", "--nl", "power:p=4"])),
        2
    );
    assert_eq!(
        code(&run(&["solve", g, "--nl", "power:p=4", "--tol", "-1"])),
        2
    );
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(
        code(&run(&[
            "gradcheck",
            g,
            "--nl",
            "odd_poly:c1=-1,c3=1",
            "--seed",
            "3"
        ])),
        0
    );
}

#[test]
fn malformed_graph_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "v a auto 1 boundary\nv b auto 1 omega\ne a b one\n").unwrap();
    let o = run(&["check", p(&bad), "--h0", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn graph_files_round_trip() {
    for name in ["path3.graph", "path4.graph", "grid6.graph"] {
        let gf = graph_file::parse(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
        let again = graph_file::parse(&graph_file::write(&gf.graph, &gf.partition, &gf.h)).unwrap();
        assert_eq!(again, gf, "{name}");
    }
}
