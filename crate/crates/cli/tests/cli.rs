use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn asalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asalab"))
        .args(args)
        .env_remove("ASALAB_GRID")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("asalab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const DISK: &str = r#"{"type":"ball","n":2,"radius":1}"#;
const CUBE_ROOT: &str = r#"{"family":"power_phi","n":2,"p":1}"#;

#[test]
fn compute_ball_uses_closed_form() {
    let v = json(&asalab(&["compute", "--body", DISK, "--func", CUBE_ROOT]));
    assert_eq!(v["route"], "ball-closed-form");
    assert!((v["value"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn compute_lp_accepts_infinite_exponent() {
    let v = json(&asalab(&["compute", "--body", DISK, "--p", "-inf"]));
    // as_{−∞}(B₂) = 2|B₂°|
    assert_eq!(v["value"]["route"], "ball-closed-form");
    assert_eq!(v["polar_identity"], v["value"]["value"]);
}

#[test]
fn spec_files_are_read() {
    let path = scratch("body.json");
    std::fs::write(&path, r#"{"type":"ellipsoid","n":2,"axes":[2,0.5]}"#).unwrap();
    let v = json(&asalab(&["compute", "--body", path.to_str().unwrap(), "--func", CUBE_ROOT]));
    assert!((v["value"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| asalab(args).status.code();
    assert_eq!(code(&["compute", "--body", "/no/such/file.json", "--func", CUBE_ROOT]), Some(2));
    assert_eq!(code(&["compute", "--body", DISK, "--func", r#"{"family":"bogus"}"#]), Some(2));
    assert_eq!(code(&["compute", "--body", DISK, "--func", CUBE_ROOT, "--grid", "63"]), Some(2));
    assert_eq!(code(&["verify", "--suite", "nope"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    let nonconvex = r#"{"type":"fourier","c0":1,"cos":[0,0,0.5]}"#;
    assert_eq!(code(&["compute", "--body", nonconvex, "--func", CUBE_ROOT]), Some(3));
    assert_eq!(code(&["compute", "--body", DISK, "--func", r#"{"family":"power_phi","n":2,"p":-1}"#]), Some(3));
}

#[test]
fn grid_from_environment() {
    let run = |grid: &str| {
        Command::new(env!("CARGO_BIN_EXE_asalab"))
            .args(["verify", "--suite", "lp_homogeneity", "--trials", "1"])
            .env("ASALAB_GRID", grid)
            .output()
            .unwrap()
    };
    let ok = run("512");
    assert_eq!(json(&ok)["grid"], 512);
    assert_eq!(run("100.5").status.code(), Some(2));
}

#[test]
fn extremal_witness_round_trips_through_compute() {
    let out = asalab(&[
        "extremal", "--body", DISK, "--func", CUBE_ROOT, "--kind", "OS_phi_star", "--budget", "2:10:4",
    ]);
    let v = json(&out);
    let estimate = v["estimate"].as_f64().unwrap();
    let witness = v["witness"].to_string();
    let dual = r#"{"family":"dual","of":{"family":"power_phi","n":2,"p":1}}"#;
    let c = json(&asalab(&["compute", "--body", &witness, "--func", dual]));
    let value = c["value"].as_f64().unwrap();
    assert!((value - estimate).abs() <= 1e-6 * estimate, "{value} vs {estimate}");
}

#[test]
fn extremal_without_search_reports_bounds_only() {
    let v = json(&asalab(&["extremal", "--body", DISK, "--func", CUBE_ROOT, "--no-optimize"]));
    assert!(v.get("witness").is_none());
    assert!(v["bounds"].is_object());
}

#[test]
fn verify_csv_is_deterministic() {
    let args = ["verify", "--suite", "scaling", "--trials", "3", "--seed", "11", "--format", "csv"];
    let (a, b) = (asalab(&args), asalab(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["check_id", "trial", "body", "function", "lhs", "rhs", "margin", "pass", "note"]
    );
    assert!(r.records().map(|x| x.unwrap()).all(|x| &x[7] == "true"));
}

#[test]
fn sweep_writes_rows_and_manifest() {
    let out = scratch("sweep.csv");
    let status = asalab(&[
        "sweep", "--quantity", "as_phi_ball", "--func", CUBE_ROOT, "--r", "0.5:2:7", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    let mut r = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<(f64, f64)> = r
        .records()
        .map(|x| {
            let x = x.unwrap();
            (x[0].parse().unwrap(), x[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0].0, 0.5);
    assert_eq!(rows[6].0, 2.0);
    // r^{2/3}·2π increases with r
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1));
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("csv.columns.json")).unwrap()).unwrap();
    assert_eq!(manifest["rows"], 7);
    assert_eq!(manifest["columns"].as_array().unwrap().len(), 2);
}
