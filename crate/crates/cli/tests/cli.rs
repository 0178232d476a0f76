use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exthall")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn list_enumerates_the_universe() {
    let v = json(&["list", "--backend", "quiver:A1@2", "--max-dim", "2"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["name"], "k2");
    assert_eq!(rows[2]["aut"], "6");
    assert_eq!(rows[2]["end"], "16");
    let g = json(&["list", "graded:@2,window=0..1", "--max-dim", "1"]);
    let names: Vec<&str> = g.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["0", "k{0}", "k{1}", "k{0}+k{1}"]);
    let z = json(&["list", "quiver:A2@2", "--max-dim", "0"]);
    assert_eq!(z.as_array().unwrap().len(), 1);
}

#[test]
fn list_as_csv() {
    let out = run(&["list", "--backend", "quiver:A2@2", "--max-dim", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,dims,end,aut,label");
    assert_eq!(lines.len(), 4);
}

#[test]
fn products_of_simples() {
    let v = json(&["mul", "--backend", "quiver:A1@2", "u[k]*u[k]"]);
    assert_eq!(v, serde_json::json!({"k2": "3/2"}));
    let unit = json(&["mul", "--backend", "quiver:A1@2", "u[0]*u[k]"]);
    assert_eq!(unit, serde_json::json!({"k": "1"}));
    let scaled = json(&["mul", "--backend", "quiver:A1@3", "2*u[k]*u[k] + -1/3*u[k2]"]);
    assert_eq!(scaled, serde_json::json!({"k2": "7/3"}));
}

#[test]
fn triple_products_associate() {
    for kind in ["F", "G", "twisted"] {
        let l = json(&["mul", "--type", kind, "--backend", "quiver:A2@2", "(u[S1]*u[S2])*u[S1]"]);
        let r = json(&["mul", "--type", kind, "--backend", "quiver:A2@2", "u[S1]*(u[S2]*u[S1])"]);
        assert_eq!(l, r, "{kind}");
    }
}

#[test]
fn constants_tables() {
    let f = json(&["constants", "--backend", "quiver:A1@2", "k", "k"]);
    let rows = f["constants"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["l"], "k2");
    assert_eq!(rows[0]["value"], "3/2");
    let g = json(&["constants", "--type", "G", "--backend", "graded:@2,window=0..1", "k{1}", "k{0}"]);
    let zero = g["constants"].as_array().unwrap().iter().find(|r| r["l"] == "0").expect("0 is a middle term");
    assert_eq!(zero["value"], "1");
    let g3 = json(&["constants", "--type", "G", "--backend", "graded:@3,window=0..1", "k{1}", "k{0}"]);
    assert_eq!(g3["constants"][0], serde_json::json!({"l": "0", "value": "1/2"}));
    let unit = json(&["constants", "--backend", "quiver:A2@2", "0", "M11"]);
    assert_eq!(unit["constants"], serde_json::json!([{"l": "M11", "value": "1"}]));
}

#[test]
fn constant_cache_round_trips() {
    let dir = std::env::temp_dir().join(format!("exthall-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("c.json");
    let args = ["constants", "--backend", "quiver:A2@2", "--cache", cache.to_str().unwrap(), "S1", "S2"];
    let a = json(&args);
    assert!(cache.exists());
    let b = json(&args);
    assert_eq!(a, b);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn euler_form() {
    let v = json(&["euler", "--backend", "quiver:A2@2", "S1", "S2"]);
    assert_eq!(v["euler"], -1);
    let v = json(&["euler", "--backend", "quiver:A2@2", "S2", "S1"]);
    assert_eq!(v["euler"], 0);
}

#[test]
fn verify_passes_and_is_reproducible() {
    let dir = std::env::temp_dir().join(format!("exthall-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let p = dir.join(format!("r{i}.json"));
            let args = [
                "verify", "--backend", "quiver:A2@2", "--max-dim", "2", "--suite", "main2,lemma33", "--seed", "7",
                "--out", p.to_str().unwrap(),
            ];
            assert_eq!(code(&args), 0);
            std::fs::read(p).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let v: Value = serde_json::from_slice(&outs[0]).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["suite"], "main2");
    assert_eq!(v[0]["failures"], serde_json::json!([]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn all_suites_skip_unsupported_ones() {
    let out = run(&["verify", "--backend", "graded:@2,window=0..1", "--per-degree", "1", "--suite", "all"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let suites: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert!(suites.contains(&"toen") && suites.contains(&"hbar"));
    assert!(!suites.contains(&"prop36"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prop36 skipped"));
}

#[test]
fn verify_csv_summary() {
    let out = run(&["verify", "--backend", "quiver:A1@2", "--max-dim", "2", "--suite", "twist", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,backend,universe,cases,failures\n"));
    assert!(text.contains("twist,quiver:A1@2,"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["list", "--backend", "nope:A1"]), 3);
    assert_eq!(code(&["mul", "--backend", "quiver:A1@2", "u[k"]), 3);
    assert_eq!(code(&["list"]), 3);
    assert_eq!(code(&["list", "quiver:A1@2", "--backend", "quiver:A1@2"]), 3);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(
        code(&["mul", "--backend", "quiver:A2@2", "--budget", "5", "u[S1+S2]*u[S1+S2]*u[S1+S2]"]),
        2
    );
    assert_eq!(code(&["verify", "--backend", "graded:@2,window=0..1", "--suite", "prop36"]), 4);
    assert_eq!(code(&["verify", "--backend", "quiver:A1@2", "--suite", "nonsense"]), 3);
}
