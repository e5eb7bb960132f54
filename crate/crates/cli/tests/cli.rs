use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn k3vol(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3vol"))
        .current_dir(dir)
        .env_remove("K3E_LOG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

/// Wire format: entry `j` multiplies `s^j t^(d-j)`.
fn form(degree: usize, terms: &[(usize, f64)]) -> Value {
    let mut c = vec![json!([0.0, 0.0]); degree + 1];
    for &(j, v) in terms {
        c[j] = json!([v, 0.0]);
    }
    json!({"degree": degree, "coeffs": c})
}

fn write(dir: &Path, name: &str, v: &Value) {
    std::fs::write(dir.join(name), v.to_string()).unwrap();
}

fn c(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn constant_square_fibre_has_tau_i() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x.json", &json!({"g2": form(8, &[(8, 4.0)]), "g3": form(12, &[])}));
    let out = k3vol(dir.path(), &["--input", "x.json", "periods", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    let (re, im) = c(&r["result"]["tau"]);
    assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12, "tau = {re} + {im}i");
    assert!(r["result"]["roundtrip_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(r["header"]["defaults"]["kodaira_table_version"], 1);
}

#[test]
fn twelve_double_roots() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x.json", &json!({"g2": form(8, &[]), "g3": form(12, &[(0, 1.0), (12, -1.0)])}));
    let out = k3vol(dir.path(), &["--input", "x.json", "discriminant"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out)["result"].clone();
    assert_eq!(r["multiplicity_sum"], 24);
    let locus = r["singular_locus"].as_array().unwrap();
    assert_eq!(locus.len(), 12);
    assert!(locus.iter().all(|p| p["multiplicity"] == 2));
    // the fibres over the 12th roots of unity are of type II
    let out = k3vol(dir.path(), &["--input", "x.json", "fibers"]);
    let r = stdout_json(&out)["result"].clone();
    assert_eq!(r["euler_sum"], 24);
    assert!(r["fibers"].as_array().unwrap().iter().all(|f| f["label"] == "II"));
}

#[test]
fn vanishing_discriminant_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x.json", &json!({"g2": form(8, &[]), "g3": form(12, &[])}));
    let out = k3vol(dir.path(), &["--input", "x.json", "discriminant"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "no_smooth_fibers");
    // (3a², a³) with a = s⁴ has Δ ≡ 0 too
    write(dir.path(), "y.json", &json!({"g2": form(8, &[(8, 3.0)]), "g3": form(12, &[(12, 1.0)])}));
    let out = k3vol(dir.path(), &["--input", "y.json", "discriminant"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_inputs_give_structured_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"g2\": [").unwrap();
    let out = k3vol(dir.path(), &["--input", "bad.json", "discriminant"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "parse");
    assert!(out.stdout.is_empty());

    write(dir.path(), "deg.json", &json!({"g2": form(7, &[(0, 1.0)]), "g3": form(12, &[(0, 1.0)])}));
    let out = k3vol(dir.path(), &["--input", "deg.json", "discriminant"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "degree_mismatch");

    write(dir.path(), "short.json", &json!({"g2": {"degree": 8, "coeffs": [[1.0, 0.0]]}, "g3": form(12, &[])}));
    let out = k3vol(dir.path(), &["--input", "short.json", "fibers"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "invalid_input");

    let out = k3vol(dir.path(), &["--input", "missing.json", "fibers"]);
    assert_eq!(stderr_json(&out)["error"]["code"], "io");
    let out = k3vol(dir.path(), &["discriminant"]);
    assert_eq!(stderr_json(&out)["error"]["code"], "missing_input");
    let out = k3vol(dir.path(), &["--seed", "1", "--tol-wp", "-1", "discriminant"]);
    assert_eq!(out.status.code(), Some(2));
    let out = k3vol(dir.path(), &["--seed", "1", "wp", "--t", "0", "--z", "oops"]);
    assert_eq!(stderr_json(&out)["error"]["code"], "invalid_point");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = k3vol(dir.path(), &["--seed", "11", "discriminant"]);
    let b = k3vol(dir.path(), &["--seed", "11", "discriminant"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = stdout_json(&a);
    assert_eq!(r["result"]["multiplicity_sum"], 24);
    assert_eq!(r["header"]["seed"], 11);
    let a = k3vol(dir.path(), &["--seed", "11", "certify", "--t", "0.2,0.1", "--z", "0.3,0.2", "--csv"]);
    let b = k3vol(dir.path(), &["--seed", "11", "certify", "--t", "0.2,0.1", "--z", "0.3,0.2", "--csv"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn wp_residual_is_small() {
    let dir = tempfile::tempdir().unwrap();
    for (seed, t, z) in [("3", "0.4,-0.2", "0.1,0.3"), ("4", "inf", "0.25,0.05"), ("5", "1:0.7", "-0.3,0.2")] {
        let out = k3vol(dir.path(), &["--seed", seed, "wp", "--t", t, "--z", z]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let r = stdout_json(&out);
        assert!(r["result"]["relative_residual"].as_f64().unwrap() <= 1e-8);
        assert_eq!(r["status"], "ok");
    }
}

#[test]
fn certificate_slope_is_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = k3vol(dir.path(), &["--seed", "2", "certify", "--t", "0.3,-0.1", "--z", "0.2,0.2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = stdout_json(&out)["result"].clone();
    assert!((r["slope"].as_f64().unwrap() + 1.0).abs() <= 1e-6);
    let sched = r["schedule"].as_array().unwrap();
    assert_eq!(sched.len(), 20);
    assert_eq!(sched[0]["R"], 10.0);

    let out = k3vol(
        dir.path(),
        &["--seed", "2", "certify", "--t", "0.3,-0.1", "--z", "0.2,0.2", "--rpoints", "5", "--csv"],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "R,bound");
    assert_eq!(data.len(), 6);
    assert!(text.lines().any(|l| l == "# seed=2"));

    let out = k3vol(dir.path(), &["--seed", "2", "certify", "--t", "0", "--z", "0.1", "--rmin", "5", "--rmax", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_fibre_and_pole_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x.json", &json!({"g2": form(8, &[]), "g3": form(12, &[(0, 1.0), (12, -1.0)])}));
    // t = 1 is a root of t¹² − 1
    let out = k3vol(dir.path(), &["--input", "x.json", "wp", "--t", "1", "--z", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "singular_fiber");
    let out = k3vol(dir.path(), &["--input", "x.json", "wp", "--t", "0.5", "--z", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["code"], "pole");
}

#[test]
fn unattainable_tolerance_exits_three_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = k3vol(dir.path(), &["--seed", "3", "--tol-roundtrip", "1e-300", "periods", "--t", "0.4"]);
    assert_eq!(out.status.code(), Some(3));
    let r = stdout_json(&out);
    assert_eq!(r["status"], "tolerance_exceeded");
    assert_eq!(r["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn lattice_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = k3vol(dir.path(), &["lattice", "sig"]);
    let r = stdout_json(&out)["result"].clone();
    assert_eq!(r["rank"], 22);
    assert_eq!(r["signature"], json!([3, 19]));
    assert_eq!(r["determinant"], "-1");
    assert_eq!(r["even"], true);

    let out = k3vol(dir.path(), &["lattice", "contains-u"]);
    let r = stdout_json(&out)["result"].clone();
    assert_eq!(r["search"]["status"], "found");
    assert_eq!(r["pairings"], json!({"ee": 0, "ff": 0, "ef": 1}));

    write(dir.path(), "neg.json", &json!({"rank": 2, "gram": [[-2, 1], [1, -2]]}));
    let out = k3vol(dir.path(), &["--input", "neg.json", "lattice", "contains-u"]);
    let r = stdout_json(&out)["result"].clone();
    assert_eq!(r["search"]["status"], "obstructed");
    assert_eq!(r["search"]["reason"]["kind"], "semidefinite");

    // ω = (e + f) in the first U block plus i(e + f) in the second
    let mut omega = vec![json!([0.0, 0.0]); 22];
    omega[16] = json!([1.0, 0.0]);
    omega[17] = json!([1.0, 0.0]);
    omega[18] = json!([0.0, 1.0]);
    omega[19] = json!([0.0, 1.0]);
    write(dir.path(), "omega.json", &Value::Array(omega));
    let out = k3vol(dir.path(), &["--input", "omega.json", "lattice", "ns"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = stdout_json(&out)["result"].clone();
    assert_eq!(r["rank"], 20);
    assert_eq!(r["inertia"], json!({"positive": 1, "negative": 19, "zero": 0}));
}

#[test]
fn kodaira_table_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = k3vol(dir.path(), &["fibers", "--dump-kodaira-table"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out)["result"].clone();
    assert_eq!(r["version"], 1);
    let out = k3vol(dir.path(), &["fibers", "--dump-kodaira-table", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "II*,>=4,=5,=10"));
}
