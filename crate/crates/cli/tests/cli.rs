use std::process::{Command, Output};

use ample_core::jsj::{witness_jsj_right, GraphOfGroups};
use ample_core::verifier::VerificationReport;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ample"));
    cmd.args(args).env_remove("AMPLE_MAX_RANK").env_remove("AMPLE_ORACLE_BOUND");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args, &[]);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

#[test]
fn word_commands() {
    assert_eq!(stdout(&["word", "reduce", "e1 E1 e2"]), "e2");
    assert_eq!(stdout(&["word", "mul", "e1 e2", "E2 e3"]), "e1 e3");
    assert_eq!(stdout(&["word", "inv", "[e1,e2]"]), "e2 e1 E2 E1");
    assert_eq!(stdout(&["word", "conj", "e1", "e2"]), "e2 e1 E2");
    assert_eq!(stdout(&["word", "reduce", "e1 E1"]), "1");
}

#[test]
fn subgroup_commands() {
    assert_eq!(stdout(&["subgroup", "member", "--gens", "e1 e2; e2", "e1"]), "true");
    assert_eq!(stdout(&["subgroup", "rank", "--gens", "e1; e1 [e2,e3]"]), "2");
    assert_eq!(stdout(&["subgroup", "intersect", "--gens", "e1; e2", "--with", "e2; e3"]), "e2");
    assert!(stdout(&["subgroup", "build", "--gens", "e1"]).contains("0 -e1-> 0"));
}

#[test]
fn primitivity_and_minimization() {
    assert_eq!(stdout(&["primitive", "[e2,e3]", "--rank", "2"]), "false");
    assert_eq!(stdout(&["primitive", "e1 [e2,e3]", "--rank", "3"]), "true");
    assert!(stdout(&["minimize", "e1 e2", "e2", "--rank", "2"]).contains("total length 2"));
    let out = run(&["primitive", "e1", "--rank", "9"], &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn basic_sort_command() {
    assert_eq!(stdout(&["basic-sort", "--relation", "e2", "--m", "2", "e2", "e1", "e2 e1 e1 e1 e1", "e1"]), "true");
    assert_eq!(
        stdout(&["basic-sort", "--relation", "e4", "--n", "2", "e1", "e2", "e1", "e1", "e1 e2 e1", "e1"]),
        "false"
    );
    assert!(stdout(&["basic-sort", "--relation", "e2", "e1", "1", "e1", "1"]).contains("off-domain"));
    assert_eq!(run(&["basic-sort", "--relation", "e2", "e1", "e2", "e3"], &[]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["word", "reduce", "e0"], &[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], &[]).status.code(), Some(2));
    assert_eq!(run(&["verify-ample"], &[]).status.code(), Some(2));
    assert_eq!(run(&["--help"], &[]).status.code(), Some(0));
}

#[test]
fn jsj_show_and_validate() {
    let text = stdout(&["jsj", "show", "right", "--index", "2"]);
    assert_eq!(GraphOfGroups::parse(&text).unwrap(), witness_jsj_right(2));
    assert!(stdout(&["jsj", "show", "example", "--index", "1", "--format", "dot"]).contains("v0 -- v1"));

    let dir = std::env::temp_dir().join(format!("ample-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.gog");
    std::fs::write(&good, &text).unwrap();
    assert_eq!(run(&["jsj", "validate", good.to_str().unwrap()], &[]).status.code(), Some(0));
    let bad = dir.join("bad.gog");
    std::fs::write(&bad, text.replace("edge 0 1 gen: e2 e3 E2 E3", "edge 0 1 gen: e2 e3")).unwrap();
    let out = run(&["jsj", "validate", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL edge-containment"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_ample_limits_and_overrides() {
    assert_eq!(run(&["verify-ample", "--n", "5"], &[]).status.code(), Some(3));
    assert_eq!(run(&["verify-ample", "--n", "2"], &[("AMPLE_MAX_RANK", "2")]).status.code(), Some(3));
    // flags win over the environment
    let out = run(&["verify-ample", "--n", "2", "--max-rank", "4"], &[("AMPLE_MAX_RANK", "2")]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["verify-ample", "--n", "2", "--json"], &[("AMPLE_ORACLE_BOUND", "5")]);
    let report = VerificationReport::from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(report.config.oracle_bound, 5);
    assert!(report.clauses.iter().filter_map(|c| c.bound).all(|b| b == 5));
}

#[test]
fn text_and_json_agree() {
    let text = stdout(&["verify-ample", "--n", "3"]);
    let json = stdout(&["verify-ample", "--n", "3", "--json"]);
    let report = VerificationReport::from_json(&json).unwrap();
    for c in &report.clauses {
        let status = serde_json::to_value(c.status).unwrap();
        assert!(text.contains(&format!("clause {}: {}", c.id, status.as_str().unwrap())), "{}", c.id);
    }
    assert!(text.ends_with("overall: pass"));
    let schema: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["n", "clauses", "overall", "config"] {
        assert!(schema.get(key).is_some(), "{key}");
    }
    for c in schema["clauses"].as_array().unwrap() {
        for key in ["id", "status", "method", "evidence", "bound", "millis"] {
            assert!(c.get(key).is_some(), "{key}");
        }
    }
}
