//! End-to-end contract tests against the compiled binary: exit codes,
//! stream separation, golden-output stability and schema validity.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn csco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csco"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

const BUILTINS: &[&str] = &["bell", "ghz", "two_electron", "spin_orbit", "plus_product"];

#[test]
fn builtins_exit_zero_in_both_formats() {
    for name in BUILTINS {
        for json in [false, true] {
            let mut args = vec!["builtin", name];
            if json {
                args.push("--json");
            }
            let out = csco(&args);
            assert_eq!(exit_code(&out), 0, "builtin {name} json={json}");
            assert!(!out.stdout.is_empty());
            assert!(out.stderr.is_empty(), "stderr should be quiet on success");
        }
    }
}

#[test]
fn golden_json_reports_are_byte_identical_across_runs() {
    for name in BUILTINS {
        let first = csco(&["builtin", name, "--json"]);
        let second = csco(&["builtin", name, "--json"]);
        assert_eq!(exit_code(&first), 0);
        assert_eq!(
            first.stdout, second.stdout,
            "builtin {name} output is not stable"
        );
    }
}

#[test]
fn json_reports_follow_the_schema() {
    let required_top = [
        "scenario",
        "a_csco",
        "b_csco",
        "c_norms",
        "condition_a_rows",
        "expected_c_match",
        "states",
        "uncertainty_ok",
    ];
    let required_state = [
        "a_labels",
        "expectation_max",
        "action_norms",
        "condition_b_literal",
        "condition_b_operational",
        "criterion_verdict",
        "oracle_verdict",
        "distribution",
        "mutual_information",
        "schmidt_rank",
        "agreement",
    ];
    for name in BUILTINS {
        let out = csco(&["builtin", name, "--json"]);
        let value: serde_json::Value =
            serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{name}: {e}"));
        // bell and ghz emit one document per B-set variant.
        let docs: Vec<&serde_json::Value> = match value.as_array() {
            Some(array) => array.iter().collect(),
            None => vec![&value],
        };
        let expected = if matches!(*name, "bell" | "ghz") {
            3
        } else {
            1
        };
        assert_eq!(docs.len(), expected, "{name}");
        for doc in docs {
            for key in required_top {
                assert!(doc.get(key).is_some(), "{name}: missing {key}");
            }
            for (k, csco_doc) in [("a_csco", &doc["a_csco"]), ("b_csco", &doc["b_csco"])] {
                for key in ["commuting", "complete", "duplicates"] {
                    assert!(csco_doc.get(key).is_some(), "{name}: {k} missing {key}");
                }
            }
            let states = doc["states"].as_array().unwrap();
            assert!(!states.is_empty());
            for state in states {
                for key in required_state {
                    assert!(state.get(key).is_some(), "{name}: state missing {key}");
                }
            }
        }
    }
}

#[test]
fn check_subcommand_reads_scenario_files() {
    let path = scenarios_dir().join("two_electron.json");
    let out = csco(&["check", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("two_electron"));
    assert!(text.contains("PREDICTED_ENTANGLED"));

    let out = csco(&["check", path.to_str().unwrap(), "--json"]);
    assert_eq!(exit_code(&out), 0);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["scenario"], "two_electron");
}

#[test]
fn check_missing_file_names_the_path() {
    let out = csco(&["check", "missing.json"]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("missing.json"), "stderr: {stderr}");
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_corpus_exits_two_with_positions() {
    let mut count = 0;
    for entry in std::fs::read_dir(data_dir()).unwrap() {
        let path = entry.unwrap().path();
        if !path
            .file_name()
            .unwrap()
            .to_string_lossy()
            .starts_with("malformed_")
        {
            continue;
        }
        count += 1;
        let out = csco(&["check", path.to_str().unwrap()]);
        assert_eq!(exit_code(&out), 2, "{}", path.display());
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert!(
            stderr.contains("line"),
            "{}: no position in: {stderr}",
            path.display()
        );
    }
    assert_eq!(count, 5);
}

#[test]
fn flag_and_argument_errors_exit_two() {
    for args in [
        vec!["builtin", "nonsense"],
        vec!["builtin"],
        vec!["builtin", "bell", "--l", "1"],
        vec!["builtin", "spin_orbit", "--l", "21"],
        vec!["builtin", "spin_orbit", "--l", "x"],
        vec!["check"],
        vec!["frobnicate"],
        vec![],
        vec!["builtin", "bell", "--wat"],
    ] {
        let out = csco(&args);
        assert_eq!(exit_code(&out), 2, "args {args:?}");
    }
}

#[test]
fn tolerance_flags_are_validated_and_applied() {
    let path = scenarios_dir().join("two_electron.json");
    let path = path.to_str().unwrap();
    // Out-of-range override is an input error.
    let out = csco(&["check", path, "--tol-zero", "0.5"]);
    assert_eq!(exit_code(&out), 2);
    // In-range overrides evaluate fine.
    let out = csco(&["check", path, "--tol-zero", "1e-9", "--tol-cluster", "1e-7"]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn max_dim_flag_caps_the_layout() {
    let path = scenarios_dir().join("ghz_xyy.json");
    let path = path.to_str().unwrap();
    let out = csco(&["check", path, "--max-dim", "4"]);
    assert_eq!(exit_code(&out), 2);
    let out = csco(&["check", path, "--max-dim", "8"]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn numeric_failure_exits_three() {
    // An absurdly tight residual tolerance (legal per validation, hopeless
    // numerically) forces the eigenbasis residual check to fail.
    let dir = std::env::temp_dir().join("csco-cli-test-numeric");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("impossible_residual.json");
    std::fs::write(
        &path,
        r#"{
            "name": "impossible",
            "subsystems": [{"kind": "spin", "s": 0.5}, {"kind": "spin", "s": 0.5}],
            "A": [{"name": "XX", "expr": "X(1)*X(2)"}, {"name": "YY", "expr": "Y(1)*Y(2)"}],
            "B": [{"name": "z1", "expr": "Z(1)"}, {"name": "z2", "expr": "Z(2)"}],
            "tolerances": {"eig_residual_tol": 1e-300}
        }"#,
    )
    .unwrap();
    let out = csco(&["check", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("numeric failure"), "stderr: {stderr}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn list_prints_every_builtin() {
    let out = csco(&["list"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in BUILTINS {
        assert!(text.contains(name), "list output lacks {name}");
    }
}

#[test]
fn disagreement_does_not_change_the_exit_code() {
    let out = csco(&["builtin", "plus_product"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("DISAGREEMENT"));
}

#[test]
fn spin_orbit_l_parameter_flows_through() {
    let out = csco(&["builtin", "spin_orbit", "--l", "2", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["scenario"], "spin_orbit(l=2)");
    assert_eq!(value["states"].as_array().unwrap().len(), 10);
}
