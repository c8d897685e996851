use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn affaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affaut")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = affaut(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|c| c.as_str().unwrap().parse().unwrap()).collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// f(g(T)) mod m by Horner, coefficients lowest degree first.
fn compose_mod(f: &[i64], g: &[i64], m: i64) -> Vec<i64> {
    let mul = |a: &[i64], b: &[i64]| {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y).rem_euclid(m);
            }
        }
        out
    };
    let mut acc = vec![0];
    for c in f.iter().rev() {
        acc = mul(&acc, g);
        acc[0] = (acc[0] + c).rem_euclid(m);
    }
    while acc.len() > 1 && *acc.last().unwrap() == 0 {
        acc.pop();
    }
    acc
}

#[test]
fn compose_reads_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let g = dir.path().join("g.json");
    std::fs::write(&f, r#"{"coeffs": ["3", "1", "5"]}"#).unwrap();
    std::fs::write(&g, r#"["1", "6", "10"]"#).unwrap();
    let v = ok_json(&["compose", "--ring", "zmod:25:q=5", "--f", path_str(&f), "--g", path_str(&g)]);
    assert_eq!(ints(&v["coeffs"]), compose_mod(&[3, 1, 5], &[1, 6, 10], 25));
    assert_eq!(v["ring"]["m"], "25");
}

#[test]
fn expressions_and_json_agree() {
    let a = ok_json(&["compose", "--ring", "zmod:27", "--f", "1 + T + q*T^2", "--g", "2*T + 9*T^3"]);
    let b = ok_json(&["compose", "--ring", "zmod:27", "--f", r#"["1","1","3"]"#, "--g", r#"["0","2","0","9"]"#]);
    assert_eq!(a, b);
}

#[test]
fn invert_round_trips_through_compose() {
    let dir = tempfile::tempdir().unwrap();
    let inv = dir.path().join("inv.json");
    let f = "1 + 3*T + 2*T^2 + 4*T^3 + 8*T^5";
    let out = affaut(&["invert", "--ring", "zmod:16:q=2", "--f", f, "--check", "--out", path_str(&inv)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&inv).unwrap()).unwrap();
    assert_eq!(v["check"]["oracle_agrees"], true);
    assert_eq!(v["depth"], 2);
    // the ring travels with the inverse, so --ring can be omitted
    let id = ok_json(&["compose", "--f", f, "--g", path_str(&inv)]);
    assert!(id.is_object());
    let id = ok_json(&["compose", "--ring", "zmod:16:q=2", "--f", f, "--g", path_str(&inv)]);
    assert_eq!(ints(&id["coeffs"]), vec![0, 1]);
}

#[test]
fn order_member_iterate() {
    let v = ok_json(&["order", "--ring", "zmod:27", "--f", "1 + T"]);
    assert_eq!(v["order"], "27");
    let v = ok_json(&["member", "--ring", "zmod:8", "--f", "T + 4*T^3", "--spec", "A:3"]);
    assert_eq!(v["member"], true);
    let v = ok_json(&["member", "--ring", "zmod:8", "--f", "T + 2*T^3", "--spec", "A:3"]);
    assert_eq!(v["member"], false);
    let v = ok_json(&["iterate", "--ring", "zmod:27", "--f", "1 + T", "--k", "5"]);
    assert_eq!(ints(&v["coeffs"]), vec![5, 1]);
}

#[test]
fn witt_verbs() {
    let v = ok_json(&["witt-add", "--p", "2", "--ring", "zmod:2", "--u", "1,0", "--v", "1,0"]);
    assert_eq!(ints(&v["components"]), vec![0, 1]);
    let v = ok_json(&["witt-mul", "--p", "2", "--ring", "zmod:2", "--u", "[1,1]", "--v", "[1,1]"]);
    assert_eq!(ints(&v["components"]), vec![1, 0]);
    let v = ok_json(&["ghost", "--p", "2", "--u", "3,5"]);
    assert_eq!(ints(&v["ghost"]), vec![3, 19]);
    let v = ok_json(&["witt-derive", "--p", "2", "--n", "1"]);
    assert_eq!(v["sum"].as_array().unwrap().len(), 2);
}

#[test]
fn witt_iso_round_trip() {
    for x in 0..27 {
        let x = x.to_string();
        let u = ok_json(&["witt-iso", "--p", "3", "--x", &x, "--n", "2"]);
        let back = ok_json(&["witt-iso", "--p", "3", "--u", &u.to_string()]);
        assert_eq!(back["residue"], Value::String(x));
        assert_eq!(back["modulus"], "27");
    }
}

#[test]
fn greenberg_transform_text() {
    let out = affaut(&["greenberg", "--p", "3", "--n", "1", "--f", "x", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "g_0 = x0\ng_1 = x1\n");
}

#[test]
fn law_round_trips_into_verify_law() {
    let dir = tempfile::tempdir().unwrap();
    let law = dir.path().join("law.json");
    let v = ok_json(&["greenberg-law", "--p", "2", "--d", "2", "--verify", "exhaustive"]);
    assert_eq!(v["verification"]["passed"], true);
    assert_eq!(v["verification"]["elements"], 16);
    std::fs::write(&law, v.to_string()).unwrap();
    let r = ok_json(&["verify-law", "--law", path_str(&law), "--mode", "exhaustive"]);
    assert_eq!(r["passed"], true);
    assert_eq!(r["associativity"]["checked"], 4096);
}

#[test]
fn adjoint_verbs() {
    let v = ok_json(&["ad", "--ring", "zmod:9", "--f", "1 + T", "--g", "T + 3*T^2", "--r", "1"]);
    // f∘g∘f^(-1) with f^(-1) = T - 1
    let mut expected = compose_mod(&[0, 1, 3], &[8, 1], 9);
    expected[0] = (expected[0] + 1) % 9;
    assert_eq!(ints(&v["coeffs"]), expected);
    let m = ok_json(&["ad-matrix", "--ring", "zmod:8", "--f", "T", "--r", "2"]);
    assert_eq!(m["entries"].as_array().unwrap().len(), 4);
    let d = ok_json(&["module-decomp", "--m", "2", "--p", "3"]);
    assert_eq!(d["matches"], true);
}

#[test]
fn seeded_output_is_deterministic() {
    let args = ["series", "--ring", "zmod:81", "--seed", "11", "--samples", "300"];
    let a = affaut(&args);
    let b = affaut(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["greenberg-law", "--p", "3", "--d", "2", "--verify", "sampled", "--samples", "200", "--seed", "5"];
    assert_eq!(affaut(&args).stdout, affaut(&args).stdout);
}

#[test]
fn exit_codes() {
    let out = affaut(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("valid verbs: compose"));

    let out = affaut(&["series", "--ring", "zmod:16"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));

    let out = affaut(&["order", "--ring", "zmod:16", "--f", "2*T"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: NotAnAutomorphism:"));

    let out = affaut(&["compose", "--f", "1 + T", "--g", "T"]);
    assert_eq!(out.status.code(), Some(2));

    let out = affaut(&["ad", "--ring", "zmod:16", "--f", "1 + T", "--g", "T + 2*T^2", "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: NotAbelian:"));
}
