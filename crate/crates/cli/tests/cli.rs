//! Black-box tests of the `realucp` binary: exit codes and JSON output.

use std::path::PathBuf;
use std::process::{Command, Output};

use realucp_cli::document::{compile, REPORT_SCHEMA};
use serde_json::{json, Value};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/examples")
        .join(name)
}

fn realucp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realucp"))
        .args(args)
        .env_remove("REALUCP_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Parses stdout and checks it against the shipped report schema.
fn report(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).expect("stdout is JSON");
    let validator = compile(REPORT_SCHEMA);
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "report violates schema: {errors:?}");
    v
}

fn temp_json(v: &Value) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), serde_json::to_vec(v).unwrap()).unwrap();
    f
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pi_plus_rho_is_cstar_extreme() {
    let o = realucp(&["check", "--json", path(&example("pi_rho.json"))]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["verdicts"]["cstar_extreme"], "yes");
    assert_eq!(r["certificate"]["kind"], "type_tally");
    assert!(r["witness"].is_null());
}

#[test]
fn double_rho_is_rejected_with_a_verified_witness() {
    let o = realucp(&["check", "--json", path(&example("rho_rho.json"))]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    assert_eq!(r["verdicts"]["cstar_extreme"], "no");
    assert_eq!(r["witness"]["verified"], true);
    assert_eq!(r["witness"]["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn text_output_names_the_verdict() {
    let o = realucp(&["check", path(&example("pi_rho.json"))]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("C*-extreme: yes"));
}

#[test]
fn invalid_inputs_exit_with_two() {
    let malformed = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(malformed.path(), "{ not json").unwrap();
    let o = realucp(&["check", path(malformed.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));

    let o = realucp(&["check", "/nonexistent/map.json"]);
    assert_eq!(code(&o), 2);

    let unknown_field = temp_json(&json!({
        "schema_version": "1", "domain": {"kind": "complex"}, "codomain_dim": 1,
        "values": [[[1]], [[0]]], "extra": true
    }));
    let o = realucp(&["check", path(unknown_field.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema violation"));

    let not_cp = temp_json(&json!({
        "schema_version": "1", "domain": {"kind": "complex"}, "codomain_dim": 2,
        "values": [[[1, 0], [0, 1]], [[0, 2], [-2, 0]]]
    }));
    let o = realucp(&["stinespring", path(not_cp.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not completely positive"));

    let o = realucp(&["check", "--tol", "-1", path(&example("pi_rho.json"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn stinespring_dilations_of_the_examples() {
    let cases = [
        ("real_part_state.json", 2, "Complex"),
        ("quaternion_state.json", 4, "Quaternion"),
        ("identity_m2.json", 2, "Real"),
    ];
    for (file, kdim, kind) in cases {
        let o = realucp(&["stinespring", "--json", path(&example(file))]);
        assert_eq!(code(&o), 0, "{file}");
        let r = report(&o);
        assert_eq!(r["kdim"], kdim, "{file}");
        assert_eq!(r["representation_type"], kind, "{file}");
        assert_eq!(r["violations"], json!([]), "{file}");
    }
    let o = realucp(&["stinespring", "--json", path(&example("identity_m2.json"))]);
    let v: Vec<Vec<f64>> = serde_json::from_value(report(&o)["isometry"].clone()).unwrap();
    let id = [[1.0, 0.0], [0.0, 1.0]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((v[i][j] - id[i][j]).abs() < 1e-10, "V = {v:?}");
        }
    }
}

#[test]
fn skew_exit_codes() {
    let o = realucp(&["skew", "--json", "--matrix", "[[0,1],[-1,0]]"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["cstar_extreme"], true);

    let o = realucp(&["skew", "--json", "--matrix", "[[0,0.5],[-0.5,0]]"]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    assert_eq!(r["cstar_extreme"], false);
    assert_eq!(r["linear_extreme"], false);

    let o = realucp(&["skew", path(&example("skew_axis.json"))]);
    assert_eq!(code(&o), 0);

    let o = realucp(&["skew", "--matrix", "[[0,1],[1,0]]"]);
    assert_eq!(code(&o), 2);
    let o = realucp(&["skew", "--matrix", "[[0,2],[-2,0]]"]);
    assert_eq!(code(&o), 2);
    let o = realucp(&["skew"]);
    assert_eq!(code(&o), 2, "clap usage errors exit with 2");
}

#[test]
fn gallery_filter_and_json() {
    let o = realucp(&["gallery", "--json", "--filter", "skew"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    let rows = r["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|row| {
        row["name"].as_str().unwrap().contains("skew")
            || row["group"].as_str().unwrap().contains("skew")
    }));

    let all = report(&realucp(&["gallery", "--json"]));
    assert!(all["rows"].as_array().unwrap().len() > rows.len());
    assert_eq!(all["all_pass"], true);

    let o = realucp(&["gallery", "--filter", "pi_rho"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("pi_rho"));
}

#[test]
fn seed_comes_from_flag_then_environment_then_default() {
    let doc = example("pi_rho.json");
    let seed_of = |o: &Output| report(o)["seed"].as_u64().unwrap();

    assert_eq!(seed_of(&realucp(&["check", "--json", path(&doc)])), 42);

    let env = Command::new(env!("CARGO_BIN_EXE_realucp"))
        .args(["check", "--json", path(&doc)])
        .env("REALUCP_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(seed_of(&env), 7);

    let both = Command::new(env!("CARGO_BIN_EXE_realucp"))
        .args(["check", "--json", "--seed", "9", path(&doc)])
        .env("REALUCP_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(seed_of(&both), 9);
}

#[test]
fn batches_keep_input_order_and_isolate_failures() {
    let read = |name: &str| -> Value {
        serde_json::from_slice(&std::fs::read(example(name)).unwrap()).unwrap()
    };
    let bad = json!({"schema_version": "1", "domain": {"kind": "complex"}, "codomain_dim": 1, "values": [[[2]], [[0]]]});
    let batch = temp_json(&json!([
        read("pi_rho.json"),
        bad,
        read("rho_rho.json"),
        read("pi_rho.json")
    ]));

    let o = realucp(&["check", "--json", path(batch.path())]);
    assert_eq!(code(&o), 2);
    let r = report(&o);
    let entries = r.as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert_eq!(entries[0]["verdicts"]["cstar_extreme"], "yes");
    assert_eq!(entries[1]["index"], 1);
    assert!(entries[1]["error"].as_str().unwrap().contains("not unital"));
    assert_eq!(entries[2]["verdicts"]["cstar_extreme"], "no");
    assert_eq!(entries[3], entries[0]);

    let good = temp_json(&json!([read("pi_rho.json"), read("rho_rho.json")]));
    assert_eq!(code(&realucp(&["check", path(good.path())])), 1);
}

#[test]
fn timings_appear_only_on_request() {
    let doc = example("pi_rho.json");
    let plain = report(&realucp(&["check", "--json", path(&doc)]));
    assert!(plain.get("timings_ms").is_none());
    let timed = report(&realucp(&["check", "--json", "--timings", path(&doc)]));
    assert!(timed["timings_ms"]
        .as_object()
        .is_some_and(|t| !t.is_empty()));
}
