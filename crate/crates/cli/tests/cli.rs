use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sixvertex_core::asymptotics::CompareReport;
use sixvertex_core::exact::{hankel_chain, ChainRecord};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sixvertex")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sixvertex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exact_small_case() {
    let o = run(&["exact", "--x", "0/1", "--n", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("Z_3 = 80"), "{err}");
    assert!(err.contains("h_2 = 40"));
    let v = stdout_json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["Z"], "80/1");
    assert_eq!(v["h"], serde_json::json!(["2/1", "4/1", "40/1"]));
}

#[test]
fn exact_json_round_trips() {
    let o = run(&["exact", "--x", "2/7", "--n", "9"]);
    let back: ChainRecord = serde_json::from_slice(&o.stdout).unwrap();
    let want = ChainRecord::from(&hankel_chain(9, &"2/7".parse().unwrap()).unwrap());
    assert_eq!(back, want);
}

#[test]
fn exact_float_path() {
    let o = run(&["exact", "--x", "1/3", "--n", "12", "--prec", "128"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["float"]["precision_bits"], 128);
    assert!(v["float"]["warning"].is_null());
}

#[test]
fn oracle_small_case() {
    let o = run(&["oracle", "--n", "2", "--a", "1", "--b", "1", "--c", "2"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("Z_2 = 8, count 2"));
    let v = stdout_json(&o);
    assert_eq!(v["Z"], "8/1");
    assert_eq!(v["count"], 2);
    assert_eq!(v["exact_agrees"], true);
}

#[test]
fn oracle_dump_and_cap() {
    let v = stdout_json(&run(&["oracle", "--n", "3", "--x", "1/3", "--dump"]));
    assert_eq!(v["count"], 7);
    assert_eq!(v["configurations"].as_array().unwrap().len(), 7);
    assert_eq!(v["exact_agrees"], true);
    assert_eq!(run(&["oracle", "--n", "7"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "--n", "2", "--a", "1"]).status.code(), Some(2));
}

#[test]
fn toda_identity() {
    let o = run(&["toda", "--x", "1/3", "--n-max", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("residual 0 for all N"));
    let v = stdout_json(&o);
    assert_eq!(v["rows"].as_array().unwrap().len(), 20);
    assert_eq!(v["all_hold"], true);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["compare", "--x", "0/1", "--n-min", "30", "--n-max", "20"],
        vec!["toda", "--n-min", "5", "--n-max", "4"],
        vec!["exact", "--x", "1/1", "--n", "3"],
        vec!["exact", "--x", "0.5", "--n", "3"],
        vec!["exact", "--n", "0"],
        vec!["exact", "--bogus"],
        vec!["phase", "--sweep", "sideways"],
        vec!["rhp", "--radius", "5"],
        vec!["fit", "--n-min", "16", "--n-max", "20"],
        vec!["exact", "--threads", "0"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn out_writes_manifest_and_is_reproducible() {
    let path = scratch("chain.csv");
    let p = path.to_str().unwrap();
    let args = ["exact", "--x", "1/3", "--n", "8", "--format", "csv", "--out", p];
    assert!(run(&args).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(String::from_utf8_lossy(&first).starts_with("k,x,h_k,tau_k_plus_1,h_k_exact"));
    let m: Value = serde_json::from_slice(&std::fs::read(format!("{p}.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["schema_version"], 1);
    assert_eq!(m["command"], "exact");
    assert_eq!(m["inputs"]["x"], "1/3");
    assert_eq!(m["inputs"]["n"], 8);
    assert!(m["elapsed_ms"].as_f64().unwrap() >= 0.0);
    assert!(m["versions"]["sixvertex-core"].is_string());
    assert!(run(&args).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn phase_sweeps() {
    let o = run(&["phase", "--x", "1/5", "--sweep", "af", "--steps", "4", "--format", "csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,y,gamma,t,Delta,F,F_reg,F_sing,phase");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with(",AF")));
    let v = stdout_json(&run(&["phase", "--sweep", "critical", "--steps", "2"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!((rows[1]["F"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    let t = stdout_json(&run(&["phase", "--x", "0/1", "--taylor"]));
    assert!(t["f1_error_derived"].as_f64().unwrap() < 1e-6);
}

#[test]
fn equilibrium_and_asymptotics() {
    let v = stdout_json(&run(&["eqm", "--x", "1/3", "--points", "11"]));
    assert!((v["normalization"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(v["variational"]["strictly_negative_outside"], true);
    assert_eq!(v["samples"].as_array().unwrap().len(), 11);
    let v = stdout_json(&run(&["asym", "--x", "0/1", "--n-min", "16", "--n-max", "18"]));
    assert!((v["F"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn rhp_report() {
    let o = run(&["rhp", "--x", "0/1", "--n", "20", "--side", "right"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["side"], "right");
    let ratio = v["scaling_ratio"].as_f64().unwrap();
    assert!(ratio > 0.3 && ratio < 0.7, "{ratio}");
}

#[test]
fn compare_round_trips_and_flags_boundary() {
    let o = run(&["compare", "--x", "0/1", "--n-min", "16", "--n-max", "27"]);
    assert!(o.status.success());
    let r: CompareReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.rows.len(), 12);
    assert!(r.fit.is_some());
    let v = stdout_json(&o);
    assert_eq!(v["near_boundary"], false);
    let o = run(&["compare", "--x", "9/10", "--n-min", "16", "--n-max", "20"]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["near_boundary"], true);
    assert!(stderr(&o).contains("widen tolerances"));
}

#[test]
fn fit_reports_c0() {
    let v = stdout_json(&run(&["fit", "--x", "0/1", "--n-min", "16", "--n-max", "40"]));
    let ln_c0 = v["ln_c0"].as_f64().unwrap();
    assert!((ln_c0 - 0.2227).abs() < 5e-3, "{ln_c0}");
}

/// Every `[default: ...]` shown in `--help` matches the checked-in defaults file.
#[test]
fn help_defaults_match_file() {
    let file: Value = serde_json::from_str(include_str!("../defaults.json")).unwrap();
    let obj = file.as_object().unwrap();
    for (cmd, defaults) in obj {
        let Some(defaults) = defaults.as_object() else { continue };
        let help = String::from_utf8(run(&[cmd, "--help"]).stdout).unwrap();
        let shown = shown_defaults(&help);
        for (key, want) in defaults {
            let got = shown.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
            assert_eq!(got, want.as_str(), "{cmd} --{key}");
        }
        for global in ["format", "threads"] {
            let got = shown.iter().find(|(k, _)| k == global).map(|(_, v)| v.as_str());
            assert_eq!(got, obj[global].as_str(), "{cmd} --{global}");
        }
        for (k, _) in &shown {
            let known = k == "format" || k == "threads" || defaults.contains_key(k);
            assert!(known, "{cmd} --{k} missing from defaults file");
        }
    }
}

fn shown_defaults(help: &str) -> Vec<(String, String)> {
    let mut blocks: Vec<String> = Vec::new();
    for line in help.lines() {
        let t = line.trim_start();
        if t.starts_with("--") || (t.starts_with('-') && t.chars().nth(1).is_some_and(|c| c.is_alphabetic())) {
            blocks.push(t.to_string());
        } else if let Some(b) = blocks.last_mut() {
            b.push(' ');
            b.push_str(t);
        }
    }
    blocks
        .iter()
        .filter_map(|b| {
            let name = b.split("--").nth(1)?.split([' ', '<']).next()?.to_string();
            let d = b.split("[default: ").nth(1)?.split(']').next()?.to_string();
            Some((name, d))
        })
        .collect()
}
