//! Command-line front end. Vertices are 1-based on the command line and
//! 0-based in the library.

mod args;
mod commands;
mod experiment;

use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use degseq_core::{Error, Exec};
use serde::Serialize;
use serde_json::{json, Value};

pub use args::{Cli, Command, Format};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure of one invocation, with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments or input files; exit 2.
    Parse(String),
    Core(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(e) => match e {
                Error::Capacity { .. } => 3,
                Error::Singularity { .. }
                | Error::UndefinedProbability { .. }
                | Error::OutOfDomain { .. }
                | Error::RequiredRadius { .. } => 4,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Parse(m) | CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind(), "exit_code": self.exit_code(), "message": self.message()}})
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub version: &'static str,
    pub seed: u64,
    pub threads: usize,
    pub exec: Exec,
    pub config: Value,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub result: Value,
    pub provenance: Provenance,
}

/// What a subcommand produced before provenance is attached.
pub(crate) struct Output {
    pub result: Value,
    /// Preformatted CSV; otherwise the scalars of `result` become one row.
    pub csv: Option<String>,
    /// Raw text that replaces the report entirely (e.g. JSON lines).
    pub raw: Option<String>,
}

impl Output {
    pub fn json(result: Value) -> Self {
        Output { result, csv: None, raw: None }
    }
}

fn exec_of(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    if threads == Some(0) {
        return Err(CliError::Parse("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))
}

/// Runs a parsed command inside its own thread pool.
pub(crate) fn execute(cli: &Cli) -> CliResult<(Report, Output)> {
    let start = Instant::now();
    let pool = pool(cli.threads)?;
    let out = pool.install(|| commands::dispatch(cli, exec_of(cli)))?;
    let config = serde_json::to_value(cli).unwrap_or(Value::Null);
    let command = config["command"]["name"].as_str().unwrap_or("").to_string();
    let report = Report {
        command,
        result: out.result.clone(),
        provenance: Provenance {
            version: VERSION,
            seed: cli.seed,
            threads: pool.current_num_threads(),
            exec: exec_of(cli),
            config,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    };
    Ok((report, out))
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some(String::new()),
        _ => None,
    }
}

/// One header row and one value row from the scalar fields of an object.
pub(crate) fn flat_csv(v: &Value) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fields: Vec<(&String, String)> = match v {
        Value::Object(map) => map.iter().filter_map(|(k, x)| scalar_text(x).map(|s| (k, s))).collect(),
        _ => Vec::new(),
    };
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(fields.iter().map(|(k, _)| k.as_str())).map_err(io)?;
    w.write_record(fields.iter().map(|(_, s)| s.as_str())).map_err(io)?;
    String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?).map_err(|e| CliError::Io(e.to_string()))
}

fn render(cli: &Cli, report: &Report, out: &Output) -> CliResult<String> {
    if let Some(raw) = &out.raw {
        return Ok(raw.clone());
    }
    match cli.format {
        Format::Json => Ok(serde_json::to_string_pretty(report).expect("serializable") + "\n"),
        Format::Csv => match &out.csv {
            Some(c) => Ok(c.clone()),
            None => flat_csv(&out.result),
        },
    }
}

/// Parses `argv` (program name first) and runs it, writing the report to
/// `stdout` and any error as JSON to `stderr`. Returns the exit code.
pub fn run_with(argv: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Parse(e.to_string().trim_end().to_string());
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.exit_code();
        }
    };
    let outcome = execute(&cli).and_then(|(report, out)| render(&cli, &report, &out));
    match outcome {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            err.exit_code()
        }
    }
}

pub fn run(argv: Vec<String>) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
