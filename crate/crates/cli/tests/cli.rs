use std::process::Command as Proc;

use serde_json::Value;
use zeqsing_cli::{builtin_manifest, exit_code, run_corpus, run_job, Command, JobSpec, OutputFormat};

fn job(c: Command, input: &str) -> JobSpec {
    JobSpec::new(c, input).vars(&["x", "y", "z"])
}

fn result(spec: &JobSpec) -> Value {
    let r = run_job(spec, true);
    assert_eq!(r.exit_code, 0, "{:?}", r.error);
    r.result.unwrap()
}

#[test]
fn cone_family_is_nu_ze() {
    let v = result(&job(Command::CheckNu, "z^2 - x^2 - (1+t)*y^2").params(&["t"]));
    assert_eq!(v["nu_ze"], true);
    assert_eq!(v["M"], 2);
    assert_eq!(v["conditions"]["cond1"], "pass");
    assert_eq!(v["conditions"]["cond2"], "pass");
    assert_eq!(v["conditions"]["cond3"], "yes");
}

#[test]
fn exit_codes() {
    let usage = [
        job(Command::CheckNu, "z^2 - x^2 +"),
        job(Command::CheckNu, "z^2 - w"),
        job(Command::CheckCurve, "y^2 - x^3"),
        job(Command::CheckNu, "z^2 - x^2").params(&["x"]),
        JobSpec { precision: Some(3), ..job(Command::Disc, "z^2 - x^3") },
    ];
    for s in &usage {
        let r = run_job(s, true);
        assert_eq!(r.exit_code, 1, "{:?}", r.error);
        assert!(r.result.is_none());
    }
    let r = run_job(&job(Command::CheckNu, "1 + z").params(&["t"]), true);
    assert_eq!(r.error.unwrap().kind, "NotAFamilyGerm");
    assert_eq!(exit_code(&zeqsing::Error::ContractionStall), 3);
    assert_eq!(exit_code(&zeqsing::Error::ContactMismatch { i: 0, j: 1, expected: 1, found: 2 }), 2);
}

#[test]
fn malformed_phi_is_usage_error() {
    let input = "vars: x y z\nparams: t\nz^2 - x^2 - (1+t)*y^2\nx + y\ny\nz\nt";
    let r = run_job(&JobSpec::new(Command::Transport, input), true);
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.error.unwrap().kind, "HypothesisViolated");
}

#[test]
fn transport_preserves_contacts() {
    let input = "vars: x y z\nparams: t\nz^2 - x^2 - (1+t)*y^2\nx + y*z\ny + z^2 - x*z\nz + x*y\nt";
    let v = result(&JobSpec { precision: Some(10), ..JobSpec::new(Command::Transport, input) });
    assert_eq!(v["contacts_preserved"], true);
    assert_eq!(v["report"]["hypotheses_hold"], true);
}

#[test]
fn wedge_identities_hold() {
    let v = result(&job(Command::VerifyIdentities, "z^2 - x^2 - (1+t)*y^2").params(&["t"]));
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["provenance"], "certified-mod-16");
}

#[test]
fn header_and_flag_precedence() {
    let r = run_job(&JobSpec::new(Command::Disc, "vars: x y z\nprecision: 7\nz^2 - x^3"), true);
    assert_eq!(r.precision, 7);
    let r = run_job(&JobSpec { precision: Some(9), ..JobSpec::new(Command::Disc, "vars: x y z\nprecision: 7\nz^2 - x^3") }, true);
    assert_eq!(r.precision, 9);
    assert_eq!(r.variables, ["x", "y", "z"]);
}

#[test]
fn tau_input_prepares() {
    let s = JobSpec { tau: vec!["a".into()], ..job(Command::Disc, "z^2 - x^2 - a*y^2") };
    let v = result(&s);
    assert_eq!(v["discriminant"], "-4*x^2 - 4*a*y^2");
    // branch computations need tau-free data
    let s = JobSpec { tau: vec!["a".into()], ..job(Command::Dimtype, "z^2 - x^2 - a*y^2") };
    assert_eq!(run_job(&s, true).error.unwrap().kind, "IncompatibleDomains");
}

#[test]
fn reports_are_reproducible() {
    let s = job(Command::Dimtype, "z^2 - x^2 - y^2");
    let a = run_job(&s, true).to_json();
    assert_eq!(a, run_job(&s, true).to_json());
    assert!(!a.contains("timing_ms"));
    assert!(run_job(&s, false).to_json().contains("timing_ms"));
    let t = run_job(&s, true).render(OutputFormat::Text);
    assert!(t.contains("dim_type: \"2\""), "{t}");
}

#[test]
fn builtin_corpus_passes() {
    let r = run_corpus(&builtin_manifest(), &JobSpec::new(Command::Corpus, ""), true);
    assert_eq!(r.exit_code, 0, "{}", r.to_text());
    assert_eq!(r.reserved, 1);
    assert!(r.passed >= 9);
}

#[test]
fn corpus_reports_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    std::fs::write(
        &p,
        r#"{"entries": [{"name": "wrong", "command": "dimtype", "input": "z^2 - x^2 - y^2",
            "variables": ["x", "y", "z"], "expect": {"dim_type": "1"}}]}"#,
    )
    .unwrap();
    let m = zeqsing_cli::load_manifest(&p).unwrap();
    let r = run_corpus(&m, &JobSpec::new(Command::Corpus, ""), true);
    assert_eq!((r.failed, r.exit_code), (1, 2));
    assert!(r.entries[0].mismatches[0].contains("dim_type"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_zeqsing");
    let out = Proc::new(bin).args(["check-curve", "y^2 - x^2*(x+t)", "--vars", "x y", "--params", "t", "--stable-output"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["ze"], "no");
    let out = Proc::new(bin).args(["disc", "z^2 -", "--vars", "x y z"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Proc::new(bin).args(["corpus", "--output", "text"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("reserved"));
}
