use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stripneg::runner::report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stripneg"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).arg("--out").arg(out).output().unwrap()
}

const BASE: &str = r#"
seed = 5
[geometry]
width = 1.0
[flux]
psi = 0.5
[potential]
family = "gaussian_ridge"
params = { amplitude = 5.641895835477563 }
[grid]
x1_extent = 10.0
x1_points = 401
x2_points = 4
"#;

#[test]
fn bound_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", BASE);
    let out = dir.path().join("bound.csv");
    let o = run(&["bound"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# config_sha256 ")));
    let body = report::csv_body(&text);
    assert!(body.starts_with("psi,phi,norm_x,bound,retained_modes,omitted\n"));
    assert!(body.contains("1.2232251656"));

    let json_out = dir.path().join("bound.json");
    let o = bin()
        .args(["bound", "--format", "json", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&json_out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&json_out).unwrap()).unwrap();
    assert_eq!(v["body"][0]["omitted"], 2);
    assert_eq!(v["config"]["seed"], 5);
}

#[test]
fn embedded_config_reproduces_body() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", BASE);
    let first = dir.path().join("first.csv");
    assert_eq!(run(&["count"], &cfg, &first).status.code(), Some(0));
    let text = std::fs::read_to_string(&first).unwrap();
    let embedded = write_config(dir.path(), "embedded.json", report::embedded_config(&text).unwrap());
    let second = dir.path().join("second.csv");
    assert_eq!(run(&["count"], &embedded, &second).status.code(), Some(0));
    let again = std::fs::read_to_string(&second).unwrap();
    assert_eq!(report::csv_body(&text), report::csv_body(&again));
    assert_eq!(text, again);
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let integer = write_config(dir.path(), "int.toml", &BASE.replace("psi = 0.5", "psi = 3.0"));
    let o = run(&["bound"], &integer, &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-integer"));

    let typo = write_config(dir.path(), "typo.toml", &BASE.replace("x2_points", "x2_pts"));
    assert_eq!(run(&["bound"], &typo, &out).status.code(), Some(1));

    let huge = write_config(dir.path(), "huge.toml", &BASE.replace("x2_points = 4", "x2_points = 100000"));
    let o = run(&["count"], &huge, &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds cap"));

    let missing = write_config(
        dir.path(),
        "missing.toml",
        &BASE.replace("family = \"gaussian_ridge\"\nparams = { amplitude = 5.641895835477563 }", "csv = \"nope.csv\""),
    );
    assert_eq!(run(&["bound"], &missing, &out).status.code(), Some(1));
    assert_eq!(run(&["bound"], &dir.path().join("absent.toml"), &out).status.code(), Some(1));
    assert_eq!(bin().arg("frobnicate").output().unwrap().status.code(), Some(1));
}

#[test]
fn sampled_potential_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("x1,x2,value\n");
    for i in 0..=40 {
        let x1 = -4.0 + 0.2 * i as f64;
        for x2 in [0.0, 1.0] {
            csv.push_str(&format!("{x1},{x2},{}\n", 2.0 * (-x1 * x1).exp()));
        }
    }
    std::fs::write(dir.path().join("v.csv"), csv).unwrap();
    let cfg = write_config(
        dir.path(),
        "run.toml",
        &BASE.replace("family = \"gaussian_ridge\"\nparams = { amplitude = 5.641895835477563 }", "csv = \"v.csv\""),
    );
    let out = dir.path().join("audit.csv");
    let o = run(&["audit"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let body = report::csv_body(&std::fs::read_to_string(&out).unwrap());
    assert!(body.starts_with("psi,phi,norm_x,bound,total_count,satisfied,notes\n"));
    assert_eq!(body.lines().count(), 2);
}

#[test]
fn ineq_writes_curve_files() {
    let dir = tempfile::tempdir().unwrap();
    let src = format!(
        "{BASE}\n[inequalities]\nhardy_functions = 5\nmagnetic_functions = 2\ncutoffs = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8]\n"
    );
    let cfg = write_config(dir.path(), "ineq.toml", &src);
    let out = dir.path().join("ineq.csv");
    let o = run(&["ineq"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let main = report::csv_body(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(main.lines().count(), 1 + 5 + 2 * 11 * 5);
    let curve = report::csv_body(&std::fs::read_to_string(dir.path().join("ineq_curve.csv")).unwrap());
    let ratios: Vec<f64> = curve.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(ratios.len(), 7);
    assert!(ratios.windows(2).all(|w| w[1] > w[0]));
    assert!(dir.path().join("ineq_curve_unweighted.csv").is_file());

    let empty = write_config(dir.path(), "empty.toml", &format!("{BASE}\n[inequalities]\nhardy_functions = 1\nmagnetic_functions = 1\ncutoffs = []\n"));
    let out = dir.path().join("empty.csv");
    assert_eq!(run(&["ineq"], &empty, &out).status.code(), Some(0));
    let curve = report::csv_body(&std::fs::read_to_string(dir.path().join("empty_curve.csv")).unwrap());
    assert_eq!(curve, "cutoff,ratio\n");
}

#[test]
fn worker_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", BASE);
    let out = dir.path().join("b.csv");
    let o = bin().env("STRIPNEG_WORKERS", "2").args(["bound", "--config"]).arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = bin().env("STRIPNEG_WORKERS", "zero").args(["bound", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
