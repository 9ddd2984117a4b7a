use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loewner"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("loewner-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, body: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn loewner")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn real_rows(v: &Value) -> Vec<Vec<f64>> {
    v["re"].as_array().unwrap().iter().map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()).collect()
}

const A: &str = r#"{"n":2,"re":[[1.5,0],[0,0.75]],"im":[[0,0],[0,0]]}"#;
const B: &str = r#"{"n":2,"re":[[0.5,0.5],[0.5,0.5]]}"#;

#[test]
fn fcalc_square_of_diagonal() {
    let a = write("a.json", A);
    let out = run(&["fcalc", "--matrix", path(&a), "--fn", "power:2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = real_rows(&json(&out));
    assert_eq!(rows, vec![vec![2.25, 0.0], vec![0.0, 0.5625]]);
}

#[test]
fn fcalc_sqrt_of_projection_and_identity() {
    let b = write("b.json", B);
    let out = run(&["fcalc", "--matrix", path(&b), "--fn", "power:0.5"]);
    assert_eq!(out.status.code(), Some(0));
    for (row, want) in real_rows(&json(&out)).iter().zip([[0.5, 0.5], [0.5, 0.5]]) {
        for (x, y) in row.iter().zip(want) {
            assert!((x - y).abs() < 1e-14);
        }
    }
    let a = write("a2.json", A);
    let out = run(&["fcalc", "--matrix", path(&a), "--fn", "identity"]);
    assert_eq!(real_rows(&json(&out)), vec![vec![1.5, 0.0], vec![0.0, 0.75]]);
}

#[test]
fn fcalc_expression_with_stdin() {
    let out = bin()
        .args(["fcalc", "--matrix", "-", "--fn", "t^2 - t", "--interval=-5,5"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            use std::io::Write;
            c.stdin.take().unwrap().write_all(A.as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rows = real_rows(&json(&out));
    assert!((rows[0][0] - 0.75).abs() < 1e-14);
    assert!((rows[1][1] + 0.1875).abs() < 1e-14);
}

#[test]
fn check_exit_codes() {
    let ok = run(&["check", "monotone", "--fn", "sqrt", "--seed", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["result"]["verdict"]["passed"], true);

    let bad = run(&["check", "monotone", "--fn", "power:2", "--seed", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    let w = &json(&bad)["result"]["verdict"]["witness"];
    assert!(w["lambda_min"].as_f64().unwrap() < 0.0);
    assert_eq!(w["points"].as_array().unwrap().len(), 3);
}

#[test]
fn check_lh_reports_reference_pair() {
    let out = run(&["check", "lh", "--p", "2", "--seed", "5", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(1));
    let r = &json(&out)["result"]["reference"];
    assert_eq!(r["order_holds"], false);
    assert!((r["det_numeric"].as_f64().unwrap() + 9.0 / 64.0).abs() < 1e-12);

    let out = run(&["check", "lh", "--p", "0.5", "--seed", "5", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["reference"]["order_holds"], true);
}

#[test]
fn check_accepts_negative_interval() {
    let out = run(&["check", "convex", "--fn", "power:2", "--interval", "-1,1", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["config"]["interval"], "(-1, 1)");
}

#[test]
fn check_hp_square_and_cube() {
    let out = run(&["check", "hp-vi", "--fn", "power:2", "--interval", "0,10", "--seed", "2", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["interval"], "[0, 10)");
    let out = run(&["check", "hp-vi", "--fn", "power:3", "--seed", "2", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_has_fixed_key_order() {
    let out = run(&["check", "monotone", "--fn", "log", "--seed", "9", "--grids", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = ["\"command\"", "\"config\"", "\"result\"", "\"version\"", "\"wall_time_s\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn rep_eval_dirac_zero() {
    let m = write("d0.json", r#"{"atom_zero":1.0,"atom_inf":0.0,"atoms":[],"density":null}"#);
    let out = run(&["rep", "eval", "--measure", path(&m), "--t", "5", "--t", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let vals = json(&out)["result"]["values"].clone();
    assert_eq!(vals[0]["f"], 1.0);
    assert_eq!(vals[1]["f"], 1.0);
}

#[test]
fn rep_power_and_atoms() {
    let out = run(&["rep", "power", "--p", "0.5", "--t", "4", "--t", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    for v in json(&out)["result"]["values"].as_array().unwrap() {
        assert!(v["rel_error"].as_f64().unwrap() < 1e-8);
    }
    let out = run(&["rep", "atoms", "--fn", "affine:2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["result"].clone();
    assert!((r["a"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((r["b"].as_f64().unwrap() - 2.0).abs() < 1e-8);
}

#[test]
fn rep_fit_then_eval_roundtrip() {
    let samples: Vec<(f64, f64)> = (0..80).map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 79.0)).map(|t| (t, 2.0 * t / (t + 1.0))).collect();
    let csv = write("s.csv", &loewner::integral::samples_to_csv(&samples));
    let measure = scratch("fit.json");
    let out = run(&["rep", "fit", "--samples", path(&csv), "--nodes", "61", "--out", path(&measure)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let residual = json(&out)["result"]["residual_norm"].as_f64().unwrap();
    assert!(residual < 1e-8);

    let out = run(&["rep", "eval", "--measure", path(&measure), "--samples", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let vals = json(&out)["result"]["values"].as_array().unwrap().clone();
    assert_eq!(vals.len(), samples.len());
    for (v, (t, f)) in vals.iter().zip(&samples) {
        assert_eq!(v["t"].as_f64().unwrap(), *t);
        assert!((v["f"].as_f64().unwrap() - f).abs() <= residual + 1e-12);
    }
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["check", "bogus", "--seed", "1"],
        &["check", "monotone", "--fn", "sqrt"],
        &["fcalc", "--matrix", "/nonexistent/m.json", "--fn", "sqrt"],
        &["check", "monotone", "--fn", "t^^2", "--seed", "1"],
        &["check", "monotone", "--fn", "sqrt", "--interval", "3,1", "--seed", "1"],
        &["rep", "power", "--p", "1.5", "--t", "1"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));
    }
    let bad = write("bad.json", r#"{"n":2,"re":[[1,2],[0,1]]}"#);
    let out = run(&["fcalc", "--matrix", path(&bad), "--fn", "sqrt"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["fcalc", "--matrix", path(&write("neg.json", r#"{"n":1,"re":[[-4]]}"#)), "--fn", "sqrt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_file_matches_stdout() {
    let out_path = scratch("report.json");
    let out = run(&["check", "corollaries", "--fn", "sqrt", "--seed", "4", "--trials", "40", "--out", path(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let file = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(file.trim_end(), String::from_utf8_lossy(&out.stdout).trim_end());
}
