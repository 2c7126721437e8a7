use std::process::Command as Process;

use lincat::doc::WorkspaceDoc;
use lincat::error::LincatError;
use lincat::fixtures::{fixture, fixture_text, FIXTURES};
use lincat::run::{combination_text, parse_k0_expression};
use lincat::workspace::explicit_dg_doc;
use lincat::{execute, parse_workspace, run, Command, Outcome, Report, Status, Workspace};
use lincat_core::linalg::{int, ratio};
use serde_json::{json, Value};

fn lincat(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_lincat")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn fixture_value(name: &str) -> Value {
    serde_json::from_str(fixture_text(name).unwrap()).unwrap()
}

/// Writes a workspace to a temp file and runs the binary on it.
fn lincat_on(value: &Value, args: &[&str]) -> (i32, Report) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ws.json");
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    let path = path.to_str().unwrap().to_string();
    let mut full = vec!["--output", "machine", args[0], &path];
    full.extend_from_slice(&args[1..]);
    let (code, stdout, _) = lincat(&full);
    (code, Report::from_machine(&stdout).expect("machine output parses"))
}

#[test]
fn fixtures_round_trip() {
    for (name, text) in FIXTURES {
        let ws = parse_workspace(text).unwrap_or_else(|e| panic!("{name}: {:?}", e.findings()));
        let again = parse_workspace(&ws.to_json()).unwrap();
        assert_eq!(ws.doc(), again.doc(), "{name}");
        assert_eq!(ws.to_json(), again.to_json(), "{name}");
    }
}

#[test]
fn explicit_tables_reproduce_the_universal_construction() {
    for name in ["dual_numbers_universal", "a2_universal", "cycle2_universal"] {
        let ws = fixture(name).unwrap();
        let mut doc: WorkspaceDoc = ws.doc().clone();
        doc.dg = explicit_dg_doc(ws.dg());
        let explicit = Workspace::from_doc(doc).unwrap_or_else(|e| panic!("{name}: {:?}", e.findings()));
        let again = parse_workspace(&explicit.to_json()).unwrap();
        assert_eq!(explicit.doc(), again.doc());
        for cmd in [Command::Validate, Command::Cohomology { max_degree: None }] {
            assert_eq!(run(&cmd, &ws).unwrap(), run(&cmd, &explicit).unwrap(), "{name}");
        }
        for c in ws.connections() {
            let cmd = Command::Chern { module: c.module.clone(), connection: Some(c.name.clone()), q: 1 };
            assert_eq!(run(&cmd, &ws).unwrap(), run(&cmd, &explicit).unwrap(), "{name}/{}", c.name);
        }
    }
}

#[test]
fn dual_numbers_example() {
    let (code, stdout, _) = lincat(&["chern", "builtin:dual_numbers_universal", "--module", "M", "--connection", "du", "--q", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("representative ω^1: du·du\n"), "{stdout}");
    assert!(stdout.contains("zero class: yes\n"), "{stdout}");
    let Outcome::Chern(r) =
        execute("builtin:dual_numbers_universal", &Command::Chern { module: "M".into(), connection: Some("du".into()), q: 1 })
            .result
            .unwrap()
    else {
        panic!("wrong outcome")
    };
    assert_eq!(r.representative, "du·du");
    assert!(r.zero_class);
}

#[test]
fn every_fixture_validates_from_the_command_line() {
    for (name, _) in FIXTURES {
        let (code, stdout, _) = lincat(&["validate", &format!("builtin:{name}")]);
        assert_eq!(code, 0, "{stdout}");
        assert!(stdout.ends_with("status: ok (exit 0)\n"));
    }
}

#[test]
fn machine_output_is_deterministic_and_round_trips() {
    let runs: &[&[&str]] = &[
        &["validate", "builtin:cycle2_universal"],
        &["cohomology", "builtin:dual_numbers_universal"],
        &["trace", "builtin:dual_numbers_universal", "--module", "F2", "--endo", "shift"],
        &["chern", "builtin:cycle2_universal", "--module", "K", "--q", "1"],
        &["invariance", "builtin:dual_numbers_universal", "--module", "F2", "--connection", "A", "--connection", "LC_F2", "--q", "1"],
        &["k0", "builtin:dual_numbers_universal", "--element", "M + E - ME", "--q", "1"],
    ];
    for args in runs {
        let mut full = vec!["--output", "machine"];
        full.extend_from_slice(args);
        let (code, first, _) = lincat(&full);
        let (_, second, _) = lincat(&full);
        assert_eq!(code, 0, "{first}");
        assert_eq!(first, second);
        let report = Report::from_machine(&first).unwrap();
        assert_eq!(report.to_machine(), first);
        let (_, text1, _) = lincat(args);
        let (_, text2, _) = lincat(args);
        assert_eq!(text1, text2);
        assert_eq!(text1, report.to_text());
    }
}

#[test]
fn corrupted_workspaces_exit_with_validation_failure() {
    let base = fixture_value("dual_numbers_universal");
    let mut cases: Vec<(&str, Value, &str)> = Vec::new();

    let mut v = base.clone();
    v["field"] = json!("R");
    cases.push(("field", v, "only \"Q\""));

    let mut v = base.clone();
    v["category"]["identities"]["*"] = json!({"u": "1"});
    cases.push(("unit", v, "category:"));

    let mut v = base.clone();
    v["modules"][2]["matrix"] = json!([[{"1": "1"}, {"1": "1"}], [{}, {}]]);
    v["modules"][2]["matrix"][1][1] = json!({"1": "1"});
    cases.push(("idempotent", v, "e² ≠ e"));

    let mut v = base.clone();
    v["connections"][0]["module"] = json!("Missing");
    cases.push(("dangling", v, "module \"Missing\" is not defined"));

    let mut v = base.clone();
    v["connections"][0]["lambda"] = json!([[{"dv": "1"}]]);
    cases.push(("label", v, "dv"));

    let mut v = base.clone();
    v["modules"][0]["family"] = json!(["nowhere"]);
    cases.push(("object", v, "nowhere"));

    let mut v = base.clone();
    v["endomorphisms"][0]["matrix"] = json!([[{"u": "1/0"}]]);
    cases.push(("scalar", v, "1/0"));

    let mut v = base.clone();
    v["surprise"] = json!(true);
    cases.push(("unknown key", v, "surprise"));

    for (what, value, needle) in cases {
        let (code, report) = lincat_on(&value, &["validate"]);
        assert_eq!(code, 1, "{what}");
        assert_eq!(report.status, Status::ValidationFailure, "{what}");
        assert!(report.findings.iter().any(|f| f.contains(needle)), "{what}: {:?}", report.findings);
    }
}

#[test]
fn explicit_dg_with_broken_leibniz_is_rejected() {
    let ws = fixture("dual_numbers_universal").unwrap();
    let mut doc = ws.doc().clone();
    doc.dg = explicit_dg_doc(ws.dg());
    let mut value = serde_json::to_value(&doc).unwrap();
    let differential = value["dg"]["differential"].as_array_mut().unwrap();
    let entry = differential.iter_mut().find(|e| e[0] == json!("u")).unwrap();
    entry[1] = json!({"du": "2"});
    let (code, report) = lincat_on(&value, &["validate"]);
    assert_eq!(code, 1);
    assert!(report.findings.iter().any(|f| f.starts_with("dg:")), "{:?}", report.findings);
}

#[test]
fn small_truncation_exits_with_two() {
    let (code, report) = lincat_on(&fixture_value("dual_numbers_universal"), &["chern", "--module", "M", "--connection", "du", "--q", "2"]);
    assert_eq!((code, report.status), (2, Status::TruncationTooSmall));
    let (code, _) = lincat_on(&fixture_value("a2_universal"), &["cohomology", "--max-degree", "4"]);
    assert_eq!(code, 2);
    let (code, _) = lincat_on(&fixture_value("point_trivial"), &["k0", "--element", "P", "--q", "2"]);
    assert_eq!(code, 2);
    let (code, report) = lincat_on(&fixture_value("a2_universal"), &["cohomology", "--max-degree", "2"]);
    assert_eq!(code, 0);
    let Some(Outcome::Cohomology(c)) = report.result else { panic!() };
    assert_eq!(c.rows.len(), 3);
}

#[test]
fn certification_failures_map_to_three() {
    let e = LincatError::from(lincat_core::Error::CertificationFailed("x".into()));
    assert_eq!(e.exit_code(), 3);
    assert_eq!(Status::from_exit_code(3), Status::CertificationFailure);
    for s in [Status::Ok, Status::ValidationFailure, Status::TruncationTooSmall, Status::CertificationFailure] {
        assert_eq!(Status::from_exit_code(s.exit_code()), s);
    }
}

#[test]
fn mismatched_references_on_the_command_line() {
    let (code, _, _) = lincat(&["chern", "builtin:dual_numbers_universal", "--module", "F2", "--connection", "du", "--q", "1"]);
    assert_eq!(code, 1);
    let (code, _, _) = lincat(&["trace", "builtin:dual_numbers_universal", "--module", "M", "--endo", "nothing"]);
    assert_eq!(code, 1);
    let (code, _, _) = lincat(&["k0", "builtin:dual_numbers_universal", "--element", "M + + E", "--q", "1"]);
    assert_eq!(code, 1);
    let (code, _, _) = lincat(&["validate", "builtin:nonexistent"]);
    assert_eq!(code, 1);
    let (code, _, _) = lincat(&["validate", "/nonexistent/ws.json"]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(lincat(&["frobnicate"]).0, 1);
    assert_eq!(lincat(&["invariance", "builtin:point_universal", "--module", "P", "--connection", "LC", "--q", "1"]).0, 1);
    assert_eq!(lincat(&["--output", "yaml", "validate", "builtin:point_universal"]).0, 1);
    let (code, stdout, _) = lincat(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("cohomology"));
}

#[test]
fn k0_expressions() {
    assert_eq!(parse_k0_expression("P + Q - S").unwrap(), vec![("P".into(), 1), ("Q".into(), 1), ("S".into(), -1)]);
    assert_eq!(parse_k0_expression("2*F - E").unwrap(), vec![("F".into(), 2), ("E".into(), -1)]);
    assert_eq!(parse_k0_expression("-3 M + M").unwrap(), vec![("M".into(), -2)]);
    assert_eq!(parse_k0_expression("du+LC_E").unwrap(), vec![("du".into(), 1), ("LC_E".into(), 1)]);
    for bad in ["", "P Q", "2*", "P + - "] {
        assert!(parse_k0_expression(bad).is_err(), "{bad:?}");
    }
}

#[test]
fn combination_formatting() {
    let t = |terms: Vec<(&str, lincat_core::Scalar)>| combination_text(terms.into_iter().map(|(l, c)| (l.to_string(), c)));
    assert_eq!(t(vec![]), "0");
    assert_eq!(t(vec![("du·du", int(1))]), "du·du");
    assert_eq!(t(vec![("u·du", int(2)), ("du", ratio(-1, 2))]), "2*u·du - 1/2*du");
    assert_eq!(t(vec![("du", int(-1)), ("u", int(0))]), "-du");
}

#[test]
fn k0_relations_through_the_command_line() {
    for (ws, element) in [("dual_numbers_universal", "M + E - ME"), ("a2_universal", "P1 + P2 - S"), ("point_universal", "P + E - PE")] {
        for q in 0..=1 {
            let report = execute(&format!("builtin:{ws}"), &Command::K0 { element: element.into(), q });
            let Some(Outcome::K0(r)) = report.result else { panic!("{:?}", report.findings) };
            assert!(r.zero_class, "{ws} q={q}");
            assert_eq!(r.representative, "0", "{ws} q={q}");
        }
    }
}
