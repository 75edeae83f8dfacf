//! End-to-end tests that spawn the real binary: golden outputs, exit codes,
//! JSON diagnostics, and the table -> classify fixed point.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_e2class"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn classify_identity_line_with_rotations() {
    let input = r#"{"sigma_generators": [[[1,0],[0,1]]], "h_generators": [[[0,-1],[1,0]]]}"#;
    let out = run(&["classify"], input);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["label"], "L2.2");
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["params"], serde_json::json!({}));
    assert_eq!(v["conjugator"], serde_json::json!([[1.0, 0.0], [0.0, 1.0]]));
}

#[test]
fn classify_output_is_byte_stable() {
    let input = r#"{"sigma_generators": [[[0.0,1.25],[1.25,0.0]]], "h_generators": [[[1.0,0.0],[0.0,-0.5]]]}"#;
    let a = run(&["classify"], input);
    let b = run(&["classify"], input);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["label"], "L2.7");
    assert!((v["params"]["beta"].as_f64().unwrap() + 0.5).abs() < 1e-9);
}

#[test]
fn malformed_json_reports_position_and_exits_2() {
    let out = run(&["classify"], "{\"sigma_generators\": [[[1,0],[0,1]]\n");
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn asymmetric_sigma_names_the_offender() {
    let input =
        r#"{"sigma_generators": [[[1,0],[0,1]], [[0,1],[0,0]]], "h_generators": [[[0,-1],[1,0]]]}"#;
    let out = run(&["classify"], input);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("sigma generator 1"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn full_sigma_is_out_of_scope_exit_3() {
    let input = r#"{"sigma_generators": [[[1,0],[0,1]], [[1,0],[0,-1]], [[0,1],[1,0]]],
                    "h_generators": [[[1,0],[0,1]]]}"#;
    let out = run(&["classify"], input);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_invariant_pair_exits_2() {
    let input = r#"{"sigma_generators": [[[1,0],[0,1]]], "h_generators": [[[0,0],[1,0]]]}"#;
    let out = run(&["classify"], input);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("invariant"), "{}", stderr(&out));
}

#[test]
fn table_matches_committed_golden_file() {
    let out = run(&["table"], "");
    assert!(out.status.success());
    let golden = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/../../catalog.json"))
        .expect("catalog.json committed at repo root");
    assert_eq!(out.stdout, golden, "table output drifted from catalog.json");
}

#[test]
fn orbit_classifies_matrix_and_vector_inputs() {
    let out = run(&["orbit"], "[[0,1],[1,0]]");
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        r#"{"eta_type":"Neg","orbit":"Elsewhere"}"#
    );

    let out = run(&["orbit"], "[1.0, 0.0, 1.0]");
    assert_eq!(
        stdout(&out).trim(),
        r#"{"eta_type":"Null","orbit":"FutureCone"}"#
    );

    let out = run(&["orbit"], "[0, 0, 0]");
    assert_eq!(
        stdout(&out).trim(),
        r#"{"eta_type":"Null","orbit":"Present"}"#
    );

    let out = run(&["orbit"], "[[0,1],[0.5,0]]");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_accepts_real_certificates_and_rejects_tampered_ones() {
    // A beta-family group conjugated by [[1.2, 0.3], [-0.4, 0.9]], computed
    // exactly: sigma = 3 * dagger(g, sigma_neg), h = g diag(1, -1/2) g^-1.
    let spec = r#"{"sigma_generators": [[[1.5,2.0],[2.0,-1.5]]], "h_generators": [[[0.85,-0.45],[-0.45,-0.35]]]}"#;
    let out = run(&["classify"], spec);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();

    let verify_input = serde_json::json!({
        "spec": serde_json::from_str::<serde_json::Value>(spec).unwrap(),
        "label": {"id": v["label"], "params": v["params"]},
        "certificate": {"conjugator": v["conjugator"]},
    });
    let out = run(&["verify"], &verify_input.to_string());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rep["pass"], true);

    // Tamper with the conjugator.
    let mut tampered = verify_input.clone();
    tampered["certificate"]["conjugator"][0][1] = serde_json::json!(
        tampered["certificate"]["conjugator"][0][1]
            .as_f64()
            .unwrap()
            + 0.1
    );
    let out = run(&["verify"], &tampered.to_string());
    assert_eq!(out.status.code(), Some(1));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rep["pass"], false);

    // Swap the label for a neighbor.
    let mut wrong = verify_input;
    wrong["label"] = serde_json::json!({"id": "L2.6", "params": {}});
    let out = run(&["verify"], &wrong.to_string());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn every_table_representative_classifies_to_its_own_label() {
    let out = run(&["table"], "");
    let table: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = table.as_array().unwrap();
    assert_eq!(entries.len(), 26);
    for entry in entries {
        let spec = serde_json::json!({
            "sigma_generators": entry["sigma_generators"],
            "h_generators": entry["h_generators"],
        });
        let out = run(&["classify"], &spec.to_string());
        assert!(out.status.success(), "{}: {}", entry["id"], stderr(&out));
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["label"], entry["id"], "fixed point failed");
        // Parameterized entries must recover the schema default.
        for p in entry["params_schema"].as_array().unwrap() {
            let name = p["name"].as_str().unwrap();
            let want = p["default"].as_f64().unwrap();
            let got = v["params"][name].as_f64().unwrap();
            assert!((got - want).abs() < 1e-9, "{}: {name}", entry["id"]);
        }
    }
}

#[test]
fn selftest_smoke_runs_clean() {
    let out = run(&["selftest", "--seed", "7", "--format", "text"], "");
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("all suites passed"), "{text}");
    // Deterministic under a fixed seed.
    let again = run(&["selftest", "--seed", "7", "--format", "text"], "");
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn tolerance_flags_are_honored() {
    // A slightly asymmetric generator passes with a loose tolerance and is
    // rejected with the default one.
    let input =
        r#"{"sigma_generators": [[[1.0, 0.001],[0.0, 1.0]]], "h_generators": [[[0,-1],[1,0]]]}"#;
    let out = run(&["classify"], input);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["classify", "--tol-residual", "0.01"], input);
    assert!(out.status.success(), "{}", stderr(&out));
}
