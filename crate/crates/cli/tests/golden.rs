//! Byte-for-byte comparison of `--stable-output` reports. Set
//! `UPDATE_GOLDEN=1` to regenerate.

use std::path::PathBuf;

use zeqsing_cli::{run_job, Command, JobSpec};

fn check(name: &str, spec: JobSpec) {
    let got = run_job(&spec, true).to_json() + "\n";
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{name} drifted from {}", path.display());
}

#[test]
fn cone_check_nu() {
    check("cone_check_nu", JobSpec::new(Command::CheckNu, "z^2 - x^2 - (1+t)*y^2").vars(&["x", "y", "z"]).params(&["t"]));
}

#[test]
fn node_to_cusp_curve() {
    check("node_to_cusp_curve", JobSpec::new(Command::CheckCurve, "y^2 - x^2*(x+t)").vars(&["x", "y"]).params(&["t"]));
}

#[test]
fn cone_tower() {
    check("cone_tower", JobSpec::new(Command::CheckTower, "z^2 - x^2 - y^2").vars(&["x", "y", "z"]));
}

#[test]
fn syntax_error() {
    check("syntax_error", JobSpec::new(Command::Prepare, "z^2 - (x").vars(&["x", "y", "z"]));
}
