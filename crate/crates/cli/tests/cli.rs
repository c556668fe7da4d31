use std::path::PathBuf;
use std::process::{Command, Output};

use koornwinder::algebra::parse::parse_poly;
use koornwinder::algebra::Poly2;
use koornwinder::families::Params;
use koornwinder::Q;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_koornwinder"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn poly(s: &str) -> Poly2<Q> {
    parse_poly(s, &Params::new()).unwrap()
}

#[test]
fn family_list_names_all_families() {
    let v = json(&["family", "list"]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["ball", "biangle", "triangle", "laguerre_jacobi", "laguerre_laguerre", "tensor"]);
}

#[test]
fn build_ball_has_dim_pi3_polynomials() {
    let v = json(&["build", "--family", "ball", "--param", "alpha=1", "--nmax", "3"]);
    assert_eq!(v["sections"]["polynomials"].as_array().unwrap().len(), 10);
}

#[test]
fn build_tensor_gives_products() {
    let v = json(&["build", "--family", "tensor", "--param", "alpha=0", "--param", "beta=0", "--nmax", "2"]);
    let ps = v["sections"]["polynomials"].as_array().unwrap();
    let get = |n: u64, m: u64| {
        let e = ps.iter().find(|p| p["n"] == n && p["m"] == m).unwrap();
        poly(e["text"].as_str().unwrap())
    };
    assert_eq!(get(2, 1), poly("x*y"));
    assert_eq!(get(2, 0), poly("x^2-1/3"));
    assert_eq!(get(2, 2), poly("y^2-1/3"));
}

#[test]
fn build_triangle_keeps_exact_rationals() {
    let v = json(&["build", "--family", "triangle", "--param", "alpha=1/2", "beta=1/3", "gamma=2", "--nmax", "2"]);
    let ps = v["sections"]["polynomials"].as_array().unwrap();
    assert_eq!(ps.len(), 6);
    let dens: Vec<&str> = ps
        .iter()
        .flat_map(|p| p["poly"]["terms"].as_array().unwrap().iter().map(|t| t["den"].as_str().unwrap()))
        .collect();
    assert!(dens.iter().any(|d| *d != "1"));
}

fn candidate_phi(v: &Value, label: &str) -> [Poly2<Q>; 3] {
    let c = v["sections"]["pearson"]["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["label"] == label)
        .unwrap_or_else(|| panic!("no candidate {label}"));
    assert_eq!(c["verdict"], "pass");
    let p = |i: usize| poly(c["phi"][i].as_str().unwrap());
    [p(0), p(1), p(2)]
}

#[test]
fn pearson_derive_ball_contains_the_reference_pair() {
    let v = json(&["pearson", "derive", "--family", "ball"]);
    let phi = candidate_phi(&v, "symmetrizer");
    assert_eq!(phi, [poly("1-x^2"), poly("-x*y"), poly("1-y^2")]);
    let cands = v["sections"]["pearson"]["candidates"].as_array().unwrap();
    assert!(cands.iter().all(|c| c["verdict"] == "pass" || c["verdict"] == "fail"));
}

#[test]
fn pearson_derive_biangle_is_symmetric() {
    let v = json(&["pearson", "derive", "--family", "biangle"]);
    let phi = candidate_phi(&v, "symmetrizer");
    assert_eq!(phi, [poly("(1-x)x"), poly("(1-x)y/2"), poly("(1-y^2)/4")]);
}

#[test]
fn pearson_verify_flags_the_intermediate_display() {
    let p = data("ll_intermediate.json");
    let v = json(&["pearson", "verify", "--family", "laguerre_laguerre", "--pair", p.to_str().unwrap()]);
    let s = &v["sections"]["verify"];
    assert_eq!(s["verdict"], "fail");
    assert_eq!(s["erratum"], "laguerre_laguerre.delta2");
    assert_ne!(s["residual"][1], "0");

    let p = data("ll_intermediate_corrected.json");
    let v = json(&["pearson", "verify", "--family", "laguerre_laguerre", "--pair", p.to_str().unwrap()]);
    assert_eq!(v["sections"]["verify"]["verdict"], "pass");
}

#[test]
fn pearson_verify_divergence_form() {
    let p = data("ball_pair.json");
    let v = json(&["pearson", "verify", "--family", "ball", "--param", "alpha=3/2", "--pair", p.to_str().unwrap()]);
    assert_eq!(v["sections"]["verify"]["verdict"], "pass");
}

#[test]
fn classify_triangle_is_krall_sheffer() {
    let v = json(&["operator", "classify", "--family", "triangle", "--nmax", "6"]);
    let op = &v["sections"]["operator"];
    assert_eq!(op["overall"]["kind"], "krall_sheffer");
    for e in op["entries"].as_array().unwrap() {
        assert_eq!(e["formula"], "-n(n+alpha+beta+gamma+2)");
    }
}

#[test]
fn classify_laguerre_laguerre_is_semiclassical() {
    let v = json(&["operator", "classify", "--family", "laguerre_laguerre", "--nmax", "5"]);
    let op = &v["sections"]["operator"];
    assert_eq!(op["overall"]["kind"], "semiclassical");
    let up = op["entries"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["coefficients"].as_object().unwrap().keys().any(|k| k.starts_with(&format!("{},", e["n"].as_u64().unwrap() + 1))));
    assert!(up, "a degree n+1 term must appear");
}

#[test]
fn orthocheck_biangle_passes() {
    let v = json(&["orthocheck", "--family", "biangle", "--nmax", "5", "--tol", "1e-10"]);
    assert_eq!(v["sections"]["orthocheck"]["passed"], true);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"family": "triangle", "nmax": 1, "params": {"alpha": "2"}}"#).unwrap();
    let v = json(&["build", "--config", cfg.to_str().unwrap(), "--nmax", "2"]);
    assert_eq!(v["metadata"]["family"], "triangle");
    assert_eq!(v["metadata"]["params"]["alpha"], "2");
    assert_eq!(v["sections"]["polynomials"].as_array().unwrap().len(), 6);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["report", "all", "--family", "biangle", "--nmax", "3"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.md");
    let out = run(&["report", "all", "--family", "tensor", "--nmax", "2", "--format", "markdown", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("# tensor"));
    assert!(text.contains("## Operator"));
}

#[test]
fn errors_are_single_line_and_nonzero() {
    for args in [
        vec!["build", "--nmax", "13"],
        vec!["build", "--family", "nope"],
        vec!["build", "--family", "ball", "--param", "alpha=-2"],
        vec!["build", "--param", "alpha"],
        vec!["pearson", "verify", "--pair", "/nonexistent.json"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: "));
    }
}
