use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use entcap::linalg::random_state;
use entcap::StateFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entcap"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const PSI_QUARTER: &str = r#"{"dims":[2,2],"amps":[[0,0],[0.5,0],[0,0.8660254037844386],[0,0]]}"#;
const XY: &str = r#"{"system":"2x2","mu":[1,1,0]}"#;

#[test]
fn decompose_examples() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", r#"{"dims":[2,2],"amps":[[1,0],[0,0],[0,0],[0,0]]}"#);
    assert_eq!(json(&run(&["decompose", "--state", s(&zero)]))["E"], 0.0);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = write(dir.path(), "bell.json", &format!(r#"{{"dims":[2,2],"amps":[[{h},0],[0,0],[0,0],[{h},0]]}}"#));
    let e = json(&run(&["decompose", "--state", s(&bell)]))["E"].as_f64().unwrap();
    assert!((e - 0.7320508).abs() < 1e-6);

    let amps: Vec<String> = (0..9).map(|i| if i == 4 { "[1,0]".into() } else { "[0,0]".into() }).collect();
    let prod = write(dir.path(), "prod.json", &format!(r#"{{"dims":[3,3],"amps":[{}]}}"#, amps.join(",")));
    assert_eq!(json(&run(&["decompose", "--state", s(&prod)]))["T_norm"], 3.0);
}

#[test]
fn off_norm_state_is_renormalized_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.json", r#"{"dims":[2,2],"amps":[[1.0000004,0],[0,0],[0,0],[0,0]]}"#);
    let out = run(&["decompose", "--state", s(&f)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("renormalized"));
}

#[test]
fn invalid_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"dims":[2,2],"amps":[[1,0],[1,0],[0,0],[0,0]]}"#);
    let out = run(&["decompose", "--state", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let garbage = write(dir.path(), "g.json", "not json");
    assert_eq!(run(&["decompose", "--state", s(&garbage)]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--state", "/nonexistent/file.json"]).status.code(), Some(2));

    let state = write(dir.path(), "psi.json", PSI_QUARTER);
    let h3 = write(dir.path(), "h3.json", r#"{"system":"2x2x2","mu":[1,1,1]}"#);
    assert_eq!(run(&["rate", "--state", s(&state), "--ham", s(&h3)]).status.code(), Some(2));
    assert_eq!(run(&["evolve", "--ham", s(&h3), "--p0", "0.1", "--dt", "1e-4", "--tmax", "1"]).status.code(), Some(2));

    let unordered = write(dir.path(), "u.json", r#"{"system":"2x2","mu":[0.1,1,0]}"#);
    assert_eq!(run(&["rate", "--state", s(&state), "--ham", s(&unordered)]).status.code(), Some(2));
    let wrong_len = write(dir.path(), "w.json", r#"{"system":"3x3","mu":[1,1,1]}"#);
    assert_eq!(run(&["capacity", "--ham", s(&wrong_len)]).status.code(), Some(2));
}

#[test]
fn rate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "psi.json", PSI_QUARTER);
    let ham = write(dir.path(), "xy.json", XY);
    let g = json(&run(&["rate", "--state", s(&state), "--ham", s(&ham)]))["gamma"].as_f64().unwrap();
    assert!((g - 2.1908902).abs() < 1e-6);

    let stationary = write(dir.path(), "z.json", r#"{"dims":[2,2],"amps":[[1,0],[0,0],[0,0],[0,0]]}"#);
    let iso = write(dir.path(), "iso.json", r#"{"system":"2x2","mu":[1,1,1]}"#);
    assert_eq!(json(&run(&["rate", "--state", s(&stationary), "--ham", s(&iso)]))["gamma"], 0.0);

    let random = StateFile::from(&random_state(&[3, 3], 12));
    let q = write(dir.path(), "q.json", &serde_json::to_string(&random).unwrap());
    let hq = write(dir.path(), "hq.json", r#"{"system":"3x3","mu":[1,0.8,0.6,0.5,0.3,0.1,0,-0.5]}"#);
    let all = json(&run(&["rate", "--state", s(&q), "--ham", s(&hq), "--method", "all"]));
    assert!(all["max_delta"].as_f64().unwrap() < 1e-6);
    for key in ["generic", "closed_form", "finite_difference"] {
        assert!(all[key]["gamma"].is_number());
    }
}

#[test]
fn capacity_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let ham = write(dir.path(), "h3.json", r#"{"system":"2x2x2","mu":[1,1,1]}"#);
    let args = ["capacity", "--ham", s(&ham), "--restarts", "6", "--seed", "3"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["class"].is_string());
    assert!(v["gamma_max"].as_f64().unwrap() > 0.0);

    let state = write(dir.path(), "opt.json", &serde_json::to_string(&v["state"]).unwrap());
    let d = json(&run(&["decompose", "--state", s(&state)]));
    let e = v["E"].as_f64().unwrap();
    assert!((d["E"].as_f64().unwrap() - e).abs() < 1e-7);

    let hq = write(dir.path(), "hq.json", r#"{"system":"3x3","mu":[1,1,1,1,1,1,1,1]}"#);
    let q = json(&run(&["capacity", "--ham", s(&hq), "--restarts", "4"]));
    assert_eq!(q["schmidt_coefficients"].as_array().unwrap().len(), 3);
}

fn csv(out: &Output) -> Vec<Vec<f64>> {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn curves_examples() {
    let tensor = run(&["curves", "--measure", "tensor", "--samples", "99"]);
    assert!(String::from_utf8_lossy(&tensor.stdout).starts_with("p,f\n"));
    let rows = csv(&tensor);
    assert_eq!(rows.len(), 99);
    let mid = rows.iter().find(|r| (r[0] - 0.5).abs() < 1e-12).unwrap();
    assert_eq!(mid[1], 0.0);
    for (a, b) in rows.iter().zip(rows.iter().rev()) {
        assert!((a[1] + b[1]).abs() < 1e-10);
    }

    let vn = csv(&run(&["curves", "--measure", "vn", "--samples", "999"]));
    let best = vn.iter().fold(&vn[0], |m, r| if r[1] > m[1] { r } else { m });
    assert!((best[1] - 1.9123).abs() < 2e-3);
    assert!((best[0] - 0.0832).abs() < 2e-3);

    assert_eq!(run(&["curves", "--measure", "tensor", "--samples", "1"]).status.code(), Some(2));
}

#[test]
fn evolve_examples() {
    let dir = tempfile::tempdir().unwrap();
    let ham = write(dir.path(), "xy.json", XY);
    let out = run(&["evolve", "--ham", s(&ham), "--p0", "0.01", "--dt", "1e-4", "--tmax", "2"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("t,p,E,gamma,res_r,res_tau\n"));
    let rows = csv(&out);
    for r in &rows {
        assert!(r[4] <= 1e-10 && r[5] <= 1e-10);
    }
    for w in rows.windows(2) {
        assert!(w[1][2] >= w[0][2]);
    }
    assert!((rows.last().unwrap()[2] - (3f64.sqrt() - 1.0)).abs() < 1e-4);

    let big = run(&["evolve", "--ham", s(&ham), "--p0", "0.01", "--dt", "0.1", "--tmax", "1"]);
    assert_eq!(big.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file_and_nothing_else() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("curve.csv");
    let out = run(&["curves", "--measure", "tensor", "--samples", "3", "--out", s(&target)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&target).unwrap(), "p,f\n0.25,1.09544512\n0.5,0\n0.75,-1.09544512\n");
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}
