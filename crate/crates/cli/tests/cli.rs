use std::path::PathBuf;
use std::process::{Command, Output};

use rankin_core::eisenstein::eis_tilde;
use rankin_core::{CycloNumber, DirichletCharacter};
use serde_json::Value;

fn rankin(args: &[&str]) -> Output {
    rankin_with(args, None)
}

fn rankin_with(args: &[&str], data: Option<&PathBuf>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rankin"));
    cmd.args(args).env_remove("RANKIN_DATA_DIR");
    if let Some(dir) = data {
        cmd.env("RANKIN_DATA_DIR", dir);
    }
    cmd.output().expect("run rankin")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn only(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v = json_lines(out);
    assert_eq!(v.len(), 1);
    v.remove(0)
}

fn data_dir(name: &str, records: &[(&str, &str)]) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("rankin-cli").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    for (label, body) in records {
        std::fs::write(dir.join(format!("{label}.json")), body).unwrap();
    }
    dir
}

fn re(v: &Value) -> f64 {
    v["re"].as_str().unwrap().parse().unwrap()
}

fn im(v: &Value) -> f64 {
    v["im"].as_str().unwrap().parse().unwrap()
}

#[test]
fn qexp_examples() {
    let v = only(&rankin(&["qexp", "eisE", "k=2", "N=4", "p=3", "--prec", "3"]));
    assert_eq!(v["coeffs"], serde_json::json!([0, 0, -4]));
    let v = only(&rankin(&["qexp", "form", "11.2.a.a", "--prec", "2"]));
    assert_eq!(v["coeffs"], serde_json::json!([0, 1]));
}

#[test]
fn qexp_spade_collapse() {
    let a = only(&rankin(&["qexp", "scriptE", "k1=12", "k2=2", "j=11", "N=4", "p=3", "--prec", "40"]));
    let b = only(&rankin(&["qexp", "eisE", "k=10", "N=4", "p=3", "--prec", "40"]));
    assert_eq!(a["coeffs"], b["coeffs"]);
    assert_eq!(a["weight"], b["weight"]);
}

#[test]
fn qexp_round_trip_and_determinism() {
    let args = ["qexp", "tildeE", "k1=8", "k2=3", "j=5", "chi=char:9:1", "N=5", "--prec", "30"];
    let first = rankin(&args);
    assert_eq!(first.stdout, rankin(&args).stdout);
    let v = only(&first);
    let chi = DirichletCharacter::from_generator_exponents(9, &[1]).unwrap();
    let direct = eis_tilde(8, 3, 5, &chi, 5, 30).unwrap();
    let parsed: Vec<CycloNumber> = v["coeffs"].as_array().unwrap().iter().map(|c| CycloNumber::from_json(c).unwrap()).collect();
    assert_eq!(parsed.as_slice(), direct.coeffs());
    assert!(parsed.iter().any(|c| c.to_rational().is_none()));
}

#[test]
fn qexp_stabilised_form_at_suffix_prime() {
    let v = only(&rankin(&["qexp", "form", "1.12.a.a@5", "stab=alpha", "--prec", "6"]));
    // a_5 of the stabilisation is alpha = 2415 + 10 sqrt(-429959)
    assert_eq!(v["coeffs"][5]["a"], 2415);
    assert_eq!(v["coeffs"][5]["b"], 10);
    assert_eq!(v["coeffs"][5]["D"], -429959);
    assert_eq!(v["coeffs"][2], -24);
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(rankin(&["qexp", "bogus", "k=1"]).status.code(), Some(1));
    assert_eq!(rankin(&["qexp", "eisE", "k=2", "N=4"]).status.code(), Some(1));
    assert_eq!(rankin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(rankin(&["qexp", "form", "2.2.a.a"]).status.code(), Some(2));
    let dir = data_dir("bad", &[("7.3.b.a", r#"{"label": "7.3.b.a", "k": 3, "N_f": 7, "p": 3, "ap": {"1": 2}}"#)]);
    let out = rankin_with(&["qexp", "form", "7.3.b.a"], Some(&dir));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ap"));
}

#[test]
fn verify_examples() {
    let out = rankin(&["verify", "slice", "--k1", "12", "--k2", "2", "--tau", "0..5", "--p", "3", "--N", "4", "--prec", "200"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 13);
    assert!(lines[..12].iter().all(|r| r["pass"] == true));
    assert_eq!(lines[12]["summary"]["failed"], 0);

    let out = rankin(&["verify", "twist", "--k1", "12", "--k2", "2", "--j", "10", "--chi", "quad3", "--N", "4", "--prec", "100"]);
    assert!(out.status.success());
    assert_eq!(json_lines(&out)[0]["pass"], true);

    let out = rankin(&["verify", "euler", "--f1", "11.2.a.a", "--f2", "11.2.a.a", "--lmax", "97"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 25);
    assert!(lines.iter().all(|r| r["pass"] != false));
}

#[test]
fn lvalue_outside_convergence() {
    let out = rankin(&["lvalue", "--f1", "1.12.a.a", "--f2", "11.2.a.a", "--j", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("convergence"));
}

#[test]
fn lvalue_synthetic_pair_is_one() {
    // every prime below 11 divides the level and has a_l = 0, so a_n = 0 for 1 < n <= 10
    let form = r#"{"label": "210.2.z.z", "k": 2, "N_f": 210, "p": 11, "ap": {"2": 0, "3": 0, "5": 0, "7": 0}}"#;
    let dir = data_dir("synthetic", &[("210.2.z.z", form)]);
    let v = only(&rankin_with(&["lvalue", "--f1", "210.2.z.z", "--f2", "210.2.z.z", "--j", "5", "--nmax", "10"], Some(&dir)));
    assert_eq!(v["value"]["re"], "1");
    assert_eq!(v["value"]["im"], "0");
}

#[test]
fn lvalue_frozen_constant() {
    let v = only(&rankin(&["lvalue", "--f1", "1.12.a.a", "--f2", "11.2.a.a", "--j", "10", "--digits", "25", "--nmax", "100000"]));
    assert_eq!(v["value"]["re"], "1.044563833133396308550967");
    assert!(v["tail_bound"].as_f64().unwrap() < 1e-10);
}

#[test]
fn interp_zero_lvalue_and_audit() {
    let args = ["interp", "--f1", "1.12.a.a", "--f2", "11.2.a.a", "--j", "10", "--chi", "quad3"];
    let zero = only(&rankin(&[&args[..], &["--lvalue", "0"]].concat()));
    assert_eq!(re(&zero["total"]), 0.0);
    for key in ["euler_ratio", "gauss_block", "archimedean"] {
        assert!(re(&zero[key]) != 0.0 || im(&zero[key]) != 0.0, "{key}");
    }
    assert_eq!(zero["regime_overlap"]["pass"], true);

    let v = only(&rankin(&[&args[..], &["--lvalue", "1.5"]].concat()));
    let mut prod = (1.0f64, 0.0f64);
    for key in ["euler_ratio", "gauss_block", "archimedean", "lvalue"] {
        let (a, b) = (re(&v[key]), im(&v[key]));
        prod = (prod.0 * a - prod.1 * b, prod.0 * b + prod.1 * a);
    }
    let (tr, ti) = (re(&v["total"]), im(&v["total"]));
    assert!((prod.0 - tr).abs() < 1e-12 * tr.abs().max(1.0));
    assert!((prod.1 - ti).abs() < 1e-12 * tr.abs().max(1.0));
    assert_eq!(v["regime"], "crystalline");
    assert_eq!(v["exact"], true);
}

#[test]
fn interp_needs_a_prime() {
    let out = rankin(&["interp", "--f1", "1.12.a.a", "--f2", "11.2.a.a", "--j", "10", "--lvalue", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = rankin(&["interp", "--f1", "1.12.a.a@5", "--f2", "11.2.a.a", "--j", "10", "--lvalue", "1"]);
    assert!(out.status.success());
}
