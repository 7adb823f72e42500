use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn qgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgraph"))
        .args(args)
        .env_remove("QGRAPH_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = qgraph(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn small_config() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "annulus_samples = 2000\nsamples = 2000\n[grid]\nnx = 41\nny = 41\nrefine_starts = 1").unwrap();
    f
}

#[test]
fn classify_anisotropic_padic_gives_coloring() {
    let v = json(&["classify", "place=Qp:3; diag=1,1"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["result"]["classification"]["verdict"], "anisotropic");
    assert_eq!(v["result"]["consequence"]["kind"], "finite-coloring");
    assert_eq!(v["result"]["consequence"]["colors"], "81");
}

#[test]
fn classify_isotropic_real_reports_growth() {
    let v = json(&["classify", "place=R; diag=1,-1"]);
    assert_eq!(v["result"]["classification"]["verdict"], "isotropic");
    let table = v["result"]["consequence"]["bound_table"].as_array().unwrap();
    let t10 = table.iter().find(|r| r["T"] == 10.0).unwrap();
    assert!((t10["analytic_bound"].as_f64().unwrap() - 2.5666).abs() < 1e-3);
}

#[test]
fn classify_global_names_witness() {
    let v = json(&["classify", "place=Q; diag=1,1"]);
    assert_eq!(v["result"]["classification"]["verdict"], "anisotropic");
    assert_eq!(v["result"]["consequence"]["anisotropic_at"], "R");
}

#[test]
fn classify_empty_sphere_has_no_edges() {
    let v = json(&["classify", "place=R; diag=-1,-2"]);
    assert_eq!(v["result"]["consequence"]["kind"], "no-edges");
}

#[test]
fn parse_error_reports_position() {
    let out = qgraph(&["classify", "place=Qp:3; diag=1,,1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("position"), "{err}");
}

#[test]
fn bound_padic_and_even_prime() {
    let v = json(&["bound", "--place", "Qp:3", "--t", "2"]);
    let r = &v["result"]["reports"][0];
    assert_eq!(r["analytic_bound"], 2.25);
    assert!(r["lower_bound"].as_f64().unwrap() >= 2.25);
    let out = qgraph(&["bound", "--place", "Qp:2", "--t", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qgraph(&["bound", "--place", "Qp:3", "--t", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_real_csv() {
    let cfg = small_config();
    let out = qgraph(&["bound", "--place", "R", "--t", "10", "--format", "csv", "--config", cfg.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("T,analytic_bound,searched_bound"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "10");
    assert!((row[1].parse::<f64>().unwrap() - 2.566643).abs() < 1e-6);
}

#[test]
fn csv_unavailable_is_usage_error() {
    let out = qgraph(&["clique", "--n", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fourier_values() {
    let v = json(&["fourier", "--place", "R", "--t", "5", "--x", "0", "--y", "0"]);
    assert!((v["result"]["mu_hat"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v = json(&["fourier", "--place", "Qp:3", "--t", "2", "--x", "1", "--y", "0"]);
    assert_eq!(v["result"]["mu_hat_exact"], "1/2");
    assert!((v["result"]["mu_hat"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn fourier_random_check_agrees() {
    for seed in ["1", "2", "3"] {
        let v = json(&["fourier", "--place", "Qp:5", "--t", "1", "--random", "--check", "--seed", seed]);
        assert_eq!(v["result"]["check"]["verdict"], "exact == oracle");
        assert_eq!(v["ok"], true);
    }
}

#[test]
fn same_seed_same_bytes() {
    let cfg = small_config();
    let args = ["color", "verify", "--form", "place=Qp:3; diag=1,1", "--seed", "42", "--config", cfg.path().to_str().unwrap()];
    let a = qgraph(&args);
    let b = qgraph(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = qgraph(&["color", "verify", "--form", "place=Qp:3; diag=1,1", "--seed", "43", "--config", cfg.path().to_str().unwrap()]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let cfg = small_config();
    let run = |threads: &str| {
        qgraph(&["color", "verify", "--form", "place=R; diag=1,2", "--threads", threads, "--config", cfg.path().to_str().unwrap()])
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn color_verify_and_negative_control() {
    let cfg = small_config();
    let path = cfg.path().to_str().unwrap();
    let v = json(&["color", "verify", "--form", "place=R; diag=1,1", "--config", path]);
    assert_eq!(v["result"]["verification"]["violations"], 0);
    assert_eq!(v["result"]["scheme"]["colors"], "16");
    let v = json(&["color", "verify", "--form", "place=R; diag=1,1", "--undersized", "--config", path]);
    assert!(v["result"]["verification"]["violations"].as_u64().unwrap() > 0);
    let v = json(&["color", "verify", "--hyperbola", "--place", "Qp:3", "--t", "2", "--config", path]);
    assert_eq!(v["result"]["verification"]["violations"], 0);
}

#[test]
fn color_isotropic_form_rejected() {
    let out = qgraph(&["color", "build", "--form", "place=R; diag=1,-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn regular_commands() {
    let v = json(&["regular", "cn", "--n", "2"]);
    assert_eq!(v["result"]["C_n"], "7");
    let v = json(&["regular", "check", "--samples", "500", "--show", "3"]);
    assert_eq!(v["result"]["summary"]["failures"], 0);
    assert_eq!(v["result"]["records"].as_array().unwrap().len(), 3);
}

#[test]
fn clique_certificate() {
    let v = json(&["clique", "--n", "4"]);
    assert_eq!(v["result"]["verified"], true);
    assert_eq!(v["result"]["certificate"]["vertices"].as_array().unwrap().len(), 5);
}

#[test]
fn table_csv() {
    let out = qgraph(&["table", "--max-p", "12", "--samples", "500", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "p,m,colors\n3,1,81\n7,1,2401\n11,1,14641\n");
}

#[test]
fn bad_config_exits_2() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "samples = 0").unwrap();
    let out = qgraph(&["regular", "cn", "--n", "2", "--config", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
