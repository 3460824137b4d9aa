//! Regression corpus: a manifest of jobs with expected report fields.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{run_job, Command, JobSpec, OutputFormat, Report, SCHEMA_VERSION};

const BUILTIN: &str = include_str!("../corpus/builtin.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub command: Command,
    #[serde(default)]
    pub input: String,
    #[serde(default)]
    pub variables: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub tau: Vec<String>,
    #[serde(default)]
    pub precision: Option<u32>,
    /// Dotted paths into `result` (or `error.kind`, `exit_code`) and their
    /// expected values.
    #[serde(default)]
    pub expect: BTreeMap<String, Value>,
    /// Placeholder entries are listed but not run.
    #[serde(default)]
    pub reserved: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

pub fn builtin_manifest() -> Manifest {
    serde_json::from_str(BUILTIN).expect("built-in corpus parses")
}

pub fn load_manifest(path: &Path) -> Result<Manifest, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Pass,
    Mismatch,
    Reserved,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryOutcome {
    pub name: String,
    pub status: EntryStatus,
    pub mismatches: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub schema_version: u32,
    pub passed: usize,
    pub failed: usize,
    pub reserved: usize,
    pub entries: Vec<EntryOutcome>,
    pub exit_code: i32,
}

impl CorpusReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s += &format!("{:<32} {:?}\n", e.name, e.status);
            for m in &e.mismatches {
                s += &format!("    {m}\n");
            }
        }
        s += &format!("{} passed, {} failed, {} reserved\n", self.passed, self.failed, self.reserved);
        s
    }

    pub fn render(&self, fmt: OutputFormat) -> String {
        match fmt {
            OutputFormat::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            OutputFormat::Text => self.to_text(),
        }
    }
}

fn lookup<'a>(report: &'a Value, path: &str) -> Option<&'a Value> {
    let (root, rest) = match path.split_once('.') {
        Some(("error", r)) => (report.get("error")?, Some(r)),
        _ if path == "exit_code" => return report.get("exit_code"),
        _ => (report.get("result")?, Some(path)),
    };
    rest.into_iter().flat_map(|r| r.split('.')).try_fold(root, |v, k| match v {
        Value::Array(a) => a.get(k.parse::<usize>().ok()?),
        _ => v.get(k),
    })
}

fn run_entry(e: &ManifestEntry, base: &JobSpec, stable: bool) -> EntryOutcome {
    if e.reserved {
        return EntryOutcome { name: e.name.clone(), status: EntryStatus::Reserved, mismatches: Vec::new(), report: None };
    }
    let spec = JobSpec {
        command: e.command,
        input: e.input.clone(),
        variables: e.variables.clone(),
        parameters: e.parameters.clone(),
        tau: e.tau.clone(),
        precision: e.precision.or(base.precision),
        ..base.clone()
    };
    let report = run_job(&spec, stable);
    let v = serde_json::to_value(&report).expect("report serializes");
    let mut mismatches = Vec::new();
    if report.exit_code != 0 && !e.expect.contains_key("exit_code") {
        let err = report.error.as_ref().map(|x| format!("{}: {}", x.kind, x.message)).unwrap_or_default();
        mismatches.push(format!("exit code {} ({err})", report.exit_code));
    }
    for (path, want) in &e.expect {
        match lookup(&v, path) {
            Some(got) if got == want => {}
            got => mismatches.push(format!("{path}: expected {want}, got {}", got.map_or("nothing".into(), |g| g.to_string()))),
        }
    }
    let status = if mismatches.is_empty() { EntryStatus::Pass } else { EntryStatus::Mismatch };
    EntryOutcome { name: e.name.clone(), status, mismatches, report: Some(report) }
}

/// Run every entry (in parallel, reported in manifest order). Exit code 2
/// if any expectation fails.
pub fn run_corpus(m: &Manifest, base: &JobSpec, stable: bool) -> CorpusReport {
    let entries: Vec<EntryOutcome> = m.entries.par_iter().map(|e| run_entry(e, base, stable)).collect();
    let count = |s| entries.iter().filter(|e| e.status == s).count();
    let (passed, failed, reserved) = (count(EntryStatus::Pass), count(EntryStatus::Mismatch), count(EntryStatus::Reserved));
    CorpusReport { schema_version: SCHEMA_VERSION, passed, failed, reserved, entries, exit_code: if failed > 0 { 2 } else { 0 } }
}
