//! End-to-end runs of the `fuforge` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn fuforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuforge"))
        .args(args)
        .env_remove("FUFORGE_CACHE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&fuforge(&["verify", "telescoping", "--base", "1,2,4,8,16"])), 0);
    assert_eq!(code(&fuforge(&["verify", "tricks", "--order", "3"])), 0);

    let out = fuforge(&["verify", "growth", "--seq", "1,2,4,8", "--factor", "4", "--json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["violations"][0]["n"], 1);
}

#[test]
fn a_single_table_can_be_checked() {
    let out = fuforge(&["verify", "galvin", "--table", "[[1,0],[0,1]]", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["stats"]["idempotent_points"], 1);
    assert_eq!(code(&fuforge(&["verify", "tricks", "--table", "[[0,1],[0,0]]"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&fuforge(&["verify", "no-such-suite"])), 2);
    assert_eq!(code(&fuforge(&["search", "fs", "--k", "2"])), 2);
    assert_eq!(code(&fuforge(&["decode", "--base", "1,3,5", "4"])), 2);
    assert_eq!(code(&fuforge(&["decode", "--base", "1,2,6,24", "1000"])), 2);
    assert_eq!(code(&fuforge(&["search", "fs", "--N", "4", "--k", "2", "--colors", "rainbow"])), 2);
    assert_eq!(code(&fuforge(&["verify", "tricks", "--workers", "0"])), 2);
    assert_eq!(code(&fuforge(&["--help"])), 0);
}

#[test]
fn search_examples() {
    let out = fuforge(&["search", "fs", "--N", "3", "--k", "2", "--colors", "constant"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("found colour 0: (1,2)"));

    let out = fuforge(&["search", "fu", "--n", "4", "--k", "2", "--coloring", "size-parity"]);
    assert!(stdout(&out).contains("({0,1},{2,3})"));

    let out = fuforge(&["search", "fs", "--N", "5", "--k", "2", "--colors", "parity", "--json"]);
    assert_eq!(json(&out)["result"]["status"], "none");

    let out = fuforge(&["search", "fs-threshold", "--k", "3", "--r", "2", "--max", "40", "--budget", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn oracle_mode_agrees_on_searches() {
    let queries: &[&[&str]] = &[
        &["search", "fs", "--N", "12", "--k", "2", "--colors", "random"],
        &["search", "fs", "--N", "9", "--k", "2", "--colors", "threshold:5"],
        &["search", "fu", "--n", "4", "--k", "2", "--coloring", "min-parity"],
        &["search", "fu", "--n", "3", "--k", "2", "--coloring", "min-parity"],
        &["search", "pair", "--n", "6", "--k", "2", "--coloring", "sum-size-parity"],
        &["search", "pair", "--n", "4", "--k", "3", "--coloring", "random:5"],
        &["search", "fs-threshold", "--k", "2", "--r", "2", "--max", "16"],
    ];
    for q in queries {
        let mut fast_args = q.to_vec();
        fast_args.push("--json");
        let mut slow_args = fast_args.clone();
        slow_args.push("--oracle");
        let (fast, slow) = (json(&fuforge(&fast_args)), json(&fuforge(&slow_args)));
        let strip = |v: &Value| {
            let mut r = v["result"].clone();
            if let Some(obj) = r.as_object_mut() {
                obj.remove("extremal");
            }
            r
        };
        assert_eq!(strip(&fast), strip(&slow), "{q:?}");
    }
}

#[test]
fn output_ignores_worker_count() {
    for args in [
        &["search", "fs-threshold", "--k", "2", "--r", "2", "--max", "20", "--json"][..],
        &["search", "pair", "--n", "5", "--k", "2", "--coloring", "random", "--seed", "9", "--json"][..],
        &["verify", "heredity", "--seed", "4", "--json"][..],
    ] {
        let one = fuforge(&[args, &["--workers", "1"]].concat());
        let four = fuforge(&[args, &["--workers", "4"]].concat());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let args = ["search", "fs", "--N", "3", "--k", "2", "--colors", "constant", "--json"];
    assert!(json(&fuforge(&args)).get("wall_time").is_none());
    assert!(json(&fuforge(&[&args[..], &["--timing"]].concat()))["wall_time"].is_f64());
}

#[test]
fn cache_is_reused_and_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let p = path.to_str().unwrap();
    let args = ["search", "fs", "--N", "10", "--k", "2", "--colors", "random", "--seed", "3", "--json", "--cache", p];

    let first = fuforge(&args);
    assert_eq!(code(&first), 0);
    let lines = std::fs::read_to_string(&path).unwrap();
    assert_eq!(lines.lines().count(), 1);

    // a doctored record proves the second run reads the cache instead of searching
    let mut record: Value = serde_json::from_str(lines.trim()).unwrap();
    record["report"]["nodes_explored"] = Value::from(4242);
    std::fs::write(&path, format!("{record}\n")).unwrap();
    assert_eq!(json(&fuforge(&args))["nodes_explored"], 4242);

    // a stale version stamp is ignored and the fresh result is appended
    record["version"] = Value::from("fuforge-0.0.0/cache-0");
    std::fs::write(&path, format!("{record}\n")).unwrap();
    assert_eq!(json(&fuforge(&args)), json(&first));
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 2);

    // the environment variable supplies the path when the flag is absent
    let env_path = dir.path().join("env.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_fuforge"))
        .args(&args[..args.len() - 2])
        .env("FUFORGE_CACHE", &env_path)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(env_path.exists());
}

#[test]
fn decode_lines() {
    assert!(stdout(&fuforge(&["decode", "--base", "pow2", "13"])).starts_with("1:0:1:1 supp={0,2,3}"));
    assert!(stdout(&fuforge(&["decode", "--base", "1,2,6,24", "17"])).starts_with("1:2:2:0"));
    assert_eq!(stdout(&fuforge(&["decode", "--base", "pow2", "0"])), "0 supp={}\n");
}
