//! Batch front end: job specs, dispatch to the core library, and versioned
//! JSON/text reports.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use zeqsing::coeffs::{Field, Rational, Tower};
use zeqsing::elim::{discriminant_locus, generalized_discriminants, squarefree_part};
use zeqsing::equising::{
    apply_frame, check_curve_family_ze, check_nu_frame, check_nu_ze_family, check_recursive_ze, dim_type_le2,
    identity_frame, sample_generic_linear, shear_family, transform_family, Frame,
};
use zeqsing::parse::{parse_input, to_rational, Parsed};
use zeqsing::puiseux::{contour_transport, parameterize_wedges, tower_names, verify_wedge_identities, PolarWedge};
use zeqsing::series::{weierstrass_prepare, Series};
use zeqsing::{Error, ObstructionKind, Provenance, UniRational};

pub mod corpus;

pub use corpus::{builtin_manifest, load_manifest, run_corpus, CorpusReport, EntryOutcome, Manifest, ManifestEntry};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_PRECISION: u32 = 16;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 10;
pub const DEFAULT_BUDGET: usize = 20;
/// Entry bound for random integer frames.
pub const FRAME_BOUND: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Prepare,
    Disc,
    Gendisc,
    CheckCurve,
    CheckTower,
    CheckNu,
    Wedges,
    VerifyIdentities,
    Transport,
    Dimtype,
    Corpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    /// File path or inline text (headers allowed, one expression per line).
    pub input: String,
    #[serde(default)]
    pub variables: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub tau: Vec<String>,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default)]
    pub output: OutputFormat,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_budget() -> usize {
    DEFAULT_BUDGET
}

impl JobSpec {
    pub fn new(command: Command, input: impl Into<String>) -> Self {
        JobSpec {
            command,
            input: input.into(),
            variables: Vec::new(),
            parameters: Vec::new(),
            tau: Vec::new(),
            precision: None,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            budget: DEFAULT_BUDGET,
            output: OutputFormat::Json,
        }
    }

    pub fn vars(mut self, v: &[&str]) -> Self {
        self.variables = v.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn params(mut self, v: &[&str]) -> Self {
        self.parameters = v.iter().map(|s| s.to_string()).collect();
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: Command,
    pub input: Vec<String>,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub tau: Vec<String>,
    pub precision: u32,
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{:?} on {}\n", self.command, self.input.join("; "));
        s += &format!("N = {}, seed = {}\n", self.precision, self.seed);
        if let Some(r) = &self.result {
            flatten("", r, &mut s);
        }
        if let Some(e) = &self.error {
            s += &format!("error ({}): {}\n", e.kind, e.message);
        }
        s += &format!("exit code {}\n", self.exit_code);
        s
    }

    pub fn render(&self, fmt: OutputFormat) -> String {
        match fmt {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Text => self.to_text(),
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => *out += &format!("{prefix}: {v}\n"),
    }
}

/// Error variant name, as reported.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "DivisionByZero",
        Error::IncompatibleDomains(_) => "IncompatibleDomains",
        Error::NotMonic => "NotMonic",
        Error::InadmissibleSpecialization(_) => "InadmissibleSpecialization",
        Error::PrecisionExhausted(_) => "PrecisionExhausted",
        Error::NotAUnit => "NotAUnit",
        Error::NotRegular { .. } => "NotRegular",
        Error::ZeroToPrecision => "ZeroToPrecision",
        Error::NotReduced => "NotReduced",
        Error::NotAFamilyGerm => "NotAFamilyGerm",
        Error::DivisibilityFailure(_) => "DivisibilityFailure",
        Error::NotDivisible(_) => "NotDivisible",
        Error::HypothesisViolated(_) => "HypothesisViolated",
        Error::BudgetExhausted { .. } => "BudgetExhausted",
        Error::ProjectionNotFinite => "ProjectionNotFinite",
        Error::LiftObstruction { .. } => "LiftObstruction",
        Error::NonUnitCofactor { .. } => "NonUnitCofactor",
        Error::ClassificationAmbiguous => "ClassificationAmbiguous",
        Error::OrderNotStabilized => "OrderNotStabilized",
        Error::IdentityViolation { .. } => "IdentityViolation",
        Error::ContractionStall => "ContractionStall",
        Error::ContactMismatch { .. } => "ContactMismatch",
        Error::VariableMismatch(_) => "VariableMismatch",
        Error::Syntax { .. } => "SyntaxError",
        Error::UndeclaredIdentifier(_) => "UndeclaredIdentifier",
        Error::NotSingular => "NotSingular",
    }
}

/// 1 = usage, 2 = internal consistency violation, 3 = precision exhausted.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::UndeclaredIdentifier(_)
        | Error::VariableMismatch(_)
        | Error::HypothesisViolated(_)
        | Error::NotAFamilyGerm
        | Error::NotReduced
        | Error::NotRegular { .. }
        | Error::NotMonic
        | Error::IncompatibleDomains(_)
        | Error::InadmissibleSpecialization(_)
        | Error::ProjectionNotFinite
        | Error::NotSingular => 1,
        Error::PrecisionExhausted(_)
        | Error::ZeroToPrecision
        | Error::OrderNotStabilized
        | Error::ContractionStall
        | Error::ClassificationAmbiguous
        | Error::BudgetExhausted { .. }
        | Error::LiftObstruction { kind: ObstructionKind::PrecisionInsufficient, .. } => 3,
        _ => 2,
    }
}

fn read_input(spec: &JobSpec) -> Result<String, Error> {
    let p = Path::new(&spec.input);
    let mut text = if !spec.input.contains('\n') && p.is_file() {
        std::fs::read_to_string(p).map_err(|e| Error::Syntax { line: 0, col: 0, msg: format!("{}: {e}", p.display()) })?
    } else {
        spec.input.clone()
    };
    // flags come last so they override file headers
    for (key, names) in [("vars", &spec.variables), ("params", &spec.parameters), ("tau", &spec.tau)] {
        if !names.is_empty() {
            text += &format!("\n{key}: {}", names.join(" "));
        }
    }
    Ok(text)
}

struct Job {
    parsed: Parsed,
    n: u32,
    nv: usize,
}

impl Job {
    fn rational(&self, i: usize) -> Result<Series<Rational>, Error> {
        let e = self.parsed.exprs.get(i).ok_or_else(|| Error::HypothesisViolated(format!("expression {} missing", i + 1)))?;
        to_rational(e).ok_or_else(|| Error::IncompatibleDomains("this command needs tau-free input".into()))
    }

    fn uni(&self) -> Result<&Series<UniRational>, Error> {
        self.parsed.exprs.first().ok_or_else(|| Error::HypothesisViolated("no expression given".into()))
    }

    fn require_vars(&self, k: usize) -> Result<(), Error> {
        if self.nv != k {
            return Err(Error::VariableMismatch(format!(
                "this command needs {k} variables, {} declared",
                self.nv
            )));
        }
        Ok(())
    }
}

fn prov(p: Provenance) -> Value {
    serde_json::to_value(p).expect("provenance serializes")
}

fn frame_value(a: &Frame) -> Value {
    json!(a)
}

/// Run one job; never panics on bad input.
pub fn run_job(spec: &JobSpec, stable: bool) -> Report {
    let start = Instant::now();
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        command: spec.command,
        input: Vec::new(),
        variables: spec.variables.clone(),
        parameters: spec.parameters.clone(),
        tau: spec.tau.clone(),
        precision: spec.precision.unwrap_or(DEFAULT_PRECISION),
        seed: spec.seed,
        samples: spec.samples,
        budget: spec.budget,
        exit_code: 0,
        result: None,
        error: None,
        timing_ms: None,
    };
    let outcome = (|| -> Result<Value, Error> {
        report.input = vec![spec.input.clone()];
        let text = read_input(spec)?;
        let parsed = parse_input(&text)?;
        report.input = parsed.exprs.iter().map(|e| e.to_string()).collect();
        report.variables = parsed.decls.vars.clone();
        report.parameters = parsed.decls.params.clone();
        report.tau = parsed.decls.tau.clone();
        let n = spec.precision.or(parsed.decls.precision).unwrap_or(DEFAULT_PRECISION);
        report.precision = n;
        if n < 4 {
            return Err(Error::HypothesisViolated(format!("precision {n} < 4")));
        }
        if parsed.decls.vars.is_empty() {
            return Err(Error::VariableMismatch("no variables declared (use `vars:` or --vars)".into()));
        }
        let nv = parsed.decls.vars.len();
        let job = Job { parsed, n, nv };
        dispatch(spec, &job)
    })();
    match outcome {
        Ok(v) => report.result = Some(v),
        Err(e) => {
            report.exit_code = exit_code(&e);
            report.error = Some(ErrorInfo { kind: error_kind(&e).into(), message: e.to_string() });
        }
    }
    if !stable {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report
}

fn dispatch(spec: &JobSpec, job: &Job) -> Result<Value, Error> {
    let n = job.n;
    match spec.command {
        Command::Prepare => {
            let f = job.uni()?;
            prepare(f, job.nv - 1, n)
        }
        Command::Disc => disc(job.uni()?, job.nv - 1, n),
        Command::Gendisc => gendisc(job.uni()?, job.nv - 1, n),
        Command::CheckCurve => {
            job.require_vars(2)?;
            let f = job.rational(0)?;
            let v = check_curve_family_ze(&f, 0, 1, n, spec.budget, spec.seed)?;
            Ok(serde_json::to_value(v).expect("serializes"))
        }
        Command::CheckTower => {
            let f = job.rational(0)?;
            let order: Vec<usize> = (0..job.nv).rev().collect();
            match check_recursive_ze(&f, &order, n) {
                Ok(s) => Ok(json!({
                    "ze": "yes",
                    "k": s.k,
                    "degrees": s.levels.iter().map(|p| p.degree()).collect::<Vec<_>>(),
                    "levels": s.levels.iter().map(|p| p.to_series().to_string()).collect::<Vec<_>>(),
                    "gen_disc_indices": s.gen_disc_indices,
                    "divisibility_certificates": s.divisibility_certificates.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "provenance": prov(s.provenance),
                })),
                Err(Error::HypothesisViolated(msg)) => Ok(json!({ "ze": "no", "reason": msg, "provenance": prov(Provenance::of(&f)) })),
                Err(e) => Err(e),
            }
        }
        Command::CheckNu => {
            job.require_vars(3)?;
            check_nu(&job.rational(0)?, n, spec)
        }
        Command::Wedges => {
            job.require_vars(3)?;
            let (frame, repaired, w, tower) = wedges(&job.rational(0)?, n, spec)?;
            Ok(json!({
                "frame": frame_value(&frame),
                "frame_repaired": repaired,
                "n": w.first().map(|x| x.ramification_n),
                "tower": tower.as_ref().map(|t| t.names()).unwrap_or_default(),
                "wedges": serde_json::to_value(&w).expect("serializes"),
                "provenance": prov(wedge_provenance(&w)),
            }))
        }
        Command::VerifyIdentities => {
            job.require_vars(3)?;
            let (frame, repaired, w, _) = wedges(&job.rational(0)?, n, spec)?;
            let r = verify_wedge_identities(&w, n)?;
            Ok(json!({
                "frame": frame_value(&frame),
                "frame_repaired": repaired,
                "all_hold": r.checks.iter().all(|c| c.holds),
                "report": serde_json::to_value(&r).expect("serializes"),
                "provenance": prov(wedge_provenance(&w)),
            }))
        }
        Command::Transport => {
            job.require_vars(3)?;
            let f = job.rational(0)?;
            let k = f.nvars();
            if job.parsed.exprs.len() != k + 1 {
                return Err(Error::HypothesisViolated(format!(
                    "transport needs the family followed by {k} coordinate images, got {}",
                    job.parsed.exprs.len() - 1
                )));
            }
            let phi: Vec<Series<Rational>> = (1..=k).map(|i| job.rational(i)).collect::<Result<_, _>>()?;
            let transformed = transform_family(&f, 3, f.vars(), &phi, &[], n)?;
            let sh = shear_family(&f)?;
            let mut tower: Tower = None;
            let w = parameterize_wedges(&sh, n, &mut tower)?;
            let r = contour_transport(&w, &phi, n)?;
            Ok(json!({
                "transformed": transformed.to_string(),
                "contacts_preserved": r.contacts_after.as_ref().map(|c| *c == r.contacts_before),
                "report": serde_json::to_value(&r).expect("serializes"),
                "provenance": prov(wedge_provenance(&w)),
            }))
        }
        Command::Dimtype => {
            job.require_vars(3)?;
            if job.nv != job.parsed.decls.ring().len() {
                return Err(Error::VariableMismatch("dimtype takes a single germ (no parameters)".into()));
            }
            let r = dim_type_le2(&job.rational(0)?, spec.samples, spec.seed, n)?;
            Ok(serde_json::to_value(r).expect("serializes"))
        }
        Command::Corpus => Err(Error::HypothesisViolated("use run_corpus for the corpus command".into())),
    }
}

fn prepare<F: Field>(f: &Series<F>, pos: usize, n: u32) -> Result<Value, Error> {
    let (u, p) = weierstrass_prepare(f, pos, n)?;
    Ok(json!({
        "variable": p.var(),
        "degree": p.degree(),
        "unit": u.to_string(),
        "prep": p.to_series().to_string(),
        "coefficients": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "provenance": prov(p.provenance().join(Provenance::of(&u))),
    }))
}

fn disc<F: Field>(f: &Series<F>, pos: usize, n: u32) -> Result<Value, Error> {
    let d = discriminant_locus(f, pos, n, false)?;
    let red = discriminant_locus(f, pos, n, true).ok();
    Ok(json!({
        "variable": f.vars()[pos],
        "discriminant": d.value.to_string(),
        "reduced": red.as_ref().map(|r| r.value.to_string()),
        "shortcut": d.shortcut,
        "provenance": prov(d.provenance),
    }))
}

fn gendisc<F: Field>(f: &Series<F>, pos: usize, n: u32) -> Result<Value, Error> {
    let (_, p) = weierstrass_prepare(f, pos, n)?;
    let (ds, j) = generalized_discriminants(&p);
    let red = squarefree_part(&p)?;
    Ok(json!({
        "variable": p.var(),
        "generalized_discriminants": ds.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "first_nonzero_index": j,
        "squarefree_part": red.to_series().to_string(),
        "provenance": prov(p.provenance().join(red.provenance())),
    }))
}

fn specialize_params(f: &Series<Rational>) -> Result<Series<Rational>, Error> {
    let mut f0 = f.clone();
    for i in (3..f.nvars()).rev() {
        f0 = f0.eval_var(i, &Rational::from(0))?;
    }
    Ok(f0)
}

/// First ν-transverse frame for `f|_{t=0}` (identity first); falls back to
/// the identity when the search budget runs out.
fn choose_frame(f: &Series<Rational>, n: u32, spec: &JobSpec) -> Result<(Frame, bool), Error> {
    let f0 = specialize_params(f)?;
    match sample_generic_linear(&f0, spec.seed, spec.budget, FRAME_BOUND, n) {
        Ok((a, _)) => {
            let repaired = a != identity_frame(3);
            Ok((a, repaired))
        }
        Err(Error::BudgetExhausted { .. }) => Ok((identity_frame(3), false)),
        Err(e) => Err(e),
    }
}

fn check_nu(f: &Series<Rational>, n: u32, spec: &JobSpec) -> Result<Value, Error> {
    let (frame, repaired) = choose_frame(f, n, spec)?;
    let g = apply_frame(f, &[0, 1, 2], &frame)?;
    if g.nvars() == 3 {
        let r = check_nu_frame(&g, n, spec.budget, spec.seed)?;
        return Ok(json!({
            "nu_transverse": r.is_transverse(),
            "frame": frame_value(&frame),
            "frame_repaired": repaired,
            "M": r.cond3.as_ref().and_then(|v| v.m),
            "conditions": {
                "cond1": r.cond1, "cond2": r.cond2,
                "cond3": r.cond3.as_ref().map(|v| v.ze),
            },
            "frame_report": serde_json::to_value(&r).expect("serializes"),
            "provenance": prov(r.cond3.as_ref().map_or(Provenance::Exact, |v| v.precision_note)),
        }));
    }
    let r = check_nu_ze_family(&g, n, spec.budget, spec.seed)?;
    Ok(json!({
        "nu_ze": r.nu_ze,
        "ze": r.family.ze,
        "M": r.family.m,
        "frame": frame_value(&frame),
        "frame_repaired": repaired,
        "conditions": {
            "cond1": r.frame.cond1, "cond2": r.frame.cond2,
            "cond3": r.frame.cond3.as_ref().map(|v| v.ze),
        },
        "frame_report": serde_json::to_value(&r.frame).expect("serializes"),
        "family": serde_json::to_value(&r.family).expect("serializes"),
        "provenance": prov(r.family.precision_note),
    }))
}

fn wedges(f: &Series<Rational>, n: u32, spec: &JobSpec) -> Result<(Frame, bool, Vec<PolarWedge>, Tower), Error> {
    let (frame, repaired) = choose_frame(f, n, spec)?;
    let g = apply_frame(f, &[0, 1, 2], &frame)?;
    let sh = shear_family(&g)?;
    let mut tower: Tower = None;
    let w = parameterize_wedges(&sh, n, &mut tower)?;
    Ok((frame, repaired, w, tower))
}

fn wedge_provenance(w: &[PolarWedge]) -> Provenance {
    w.iter().fold(Provenance::Exact, |p, x| p.join(Provenance::of(&x.y)).join(Provenance::of(&x.z)))
}

/// Tower generator names used by a wedge list (for text output).
pub fn wedge_tower(w: &[PolarWedge]) -> Vec<String> {
    w.iter().map(|x| tower_names(&x.y)).max_by_key(|v| v.len()).unwrap_or_default()
}
