use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use zeqsing_cli::{
    builtin_manifest, load_manifest, run_corpus, run_job, Command, JobSpec, OutputFormat, DEFAULT_BUDGET,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};

/// Zariski equisingularity toolkit for power-series germs.
#[derive(Parser, Debug)]
#[command(name = "zeqsing", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Input file or inline expression(s); for `corpus`, an optional manifest.
    input: Option<String>,
    /// Space variables, e.g. "x y z" (overrides `vars:` headers).
    #[arg(long, value_delimiter = ' ', num_args = 1..)]
    vars: Vec<String>,
    /// Family parameters.
    #[arg(long, value_delimiter = ' ', num_args = 1..)]
    params: Vec<String>,
    /// Symbolic coefficient parameters.
    #[arg(long, value_delimiter = ' ', num_args = 1..)]
    tau: Vec<String>,
    /// Truncation degree N (at least 4; default 16).
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Attempts for randomized frame searches.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Omit timings so output is byte-stable.
    #[arg(long)]
    stable_output: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = JobSpec {
        command: cli.command,
        input: cli.input.clone().unwrap_or_default(),
        variables: cli.vars,
        parameters: cli.params,
        tau: cli.tau,
        precision: cli.precision,
        seed: cli.seed,
        samples: cli.samples,
        budget: cli.budget,
        output: cli.output,
    };
    let code = if cli.command == Command::Corpus {
        let manifest = match &cli.input {
            Some(p) => match load_manifest(&PathBuf::from(p)) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            },
            None => builtin_manifest(),
        };
        let r = run_corpus(&manifest, &spec, cli.stable_output);
        emit(&r.render(cli.output));
        r.exit_code
    } else {
        if cli.input.is_none() {
            eprintln!("error: {:?} needs an input", cli.command);
            return ExitCode::from(1);
        }
        let r = run_job(&spec, cli.stable_output);
        emit(&r.render(cli.output));
        r.exit_code
    };
    ExitCode::from(code as u8)
}

/// Print, tolerating a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}
