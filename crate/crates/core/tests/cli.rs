use std::process::{Command, Output};

use serde_json::Value;

fn singscheme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singscheme")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn params_prints_function_args_and_decimal_value() {
    let out = singscheme(&["params", "gauss-binom", "--n", "4", "--k", "2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["function"], "gauss_binom");
    assert_eq!(v["args"]["n"], "4");
    assert_eq!(v["value"], "35");
}

#[test]
fn bad_parameters_are_usage_errors() {
    assert_eq!(singscheme(&["params", "gauss-binom", "--n", "4", "--k", "2", "--q", "1"]).status.code(), Some(2));
    assert_eq!(singscheme(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(singscheme(&["scheme", "build", "--q", "2", "--n", "2", "--l", "2", "--d", "1", "--d0", "2"]).status.code(), Some(2));
    assert_eq!(singscheme(&["--help"]).status.code(), Some(0));
}

#[test]
fn resource_cap_exits_with_three() {
    let out = singscheme(&["enum", "--q", "2", "--n", "6", "--l", "6", "--t", "4", "--t1", "2", "--max-points", "100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spectra_reports_the_eigenmatrix() {
    let out = singscheme(&["spectra", "--q", "2", "--n", "4", "--d", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert_eq!(r["P"], serde_json::json!([["1", "1", "1"], ["18", "3", "-3"], ["16", "-4", "2"]]));
    assert_eq!(r["verified"], true);
}

#[test]
fn bound_reports_closed_form_and_search() {
    let out = singscheme(&["bound", "--q", "2", "--n", "4", "--d", "2", "--search"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert_eq!(r["closed_form"], "8");
    let found: u64 = r["brute_force_max"].as_str().unwrap().parse().unwrap();
    assert!(found <= 8);
    assert_eq!(r["witness"].as_array().unwrap().len() as u64, found);
}

#[test]
fn failing_scheme_check_exits_with_one() {
    let out = singscheme(&["scheme", "verify", "--q", "2", "--n", "2", "--l", "2", "--d", "2", "--d0", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["results"]["point_count"], "18");
}

#[test]
fn cache_directory_from_environment_is_used_and_reread() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["enum", "--q", "2", "--n", "2", "--l", "2", "--t", "2", "--t1", "1"];
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_singscheme"))
            .args(args)
            .env("SINGSCHEME_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(json(&first)["results"]["from_cache"], false);
    assert!(dir.path().join("stratum_q2_n2_l2_t2_t11.json").exists());
    let second = run();
    assert_eq!(json(&second)["results"]["from_cache"], true);
    assert_eq!(json(&first)["results"]["count"], json(&second)["results"]["count"]);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = singscheme(&["spectra", "--q", "3", "--n", "4", "--d", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["command"], "spectra");
}
