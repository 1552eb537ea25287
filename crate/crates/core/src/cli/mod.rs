//! Command-line front end: scenario-file parsing, query dispatch and report
//! serialization.
//!
//! Errors are printed to stderr as `error[<category>]: <location>: <message>`
//! and map to exit codes: 2 parse/schema/usage, 3 physics validation,
//! 4 engine refusal, 5 resource cap.

mod builtin;
mod report;
mod schema;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use builtin::{catalog, run_scenario, Catalog, ScenarioRunReport, SweepRow};
pub use report::{
    format_report, run_query, to_json, EngineSettings, FamilySummary, PairRow, QueryOutcome, QueryResult, Render,
    Report,
};
pub use schema::{
    parse_scenario_file, Amplitude, DecompositionEntry, FactorBasisSpec, FactorSpec, GateSpec, HamiltonianSpec,
    InitialSpec, PredicateSpec, ProjectorSpec, PropagatorEntry, QuerySpec, ScenarioFile, ScenarioSpec, StepSpec,
};

use crate::histories::{Condition, EngineConfig, DEFAULT_MAX_HISTORIES};
use crate::linalg::ToleranceConfig;

/// Environment variable overriding the history cap.
pub const MAX_HISTORIES_ENV: &str = "CHRONOLOGIC_MAX_HISTORIES";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCategory {
    Io,
    Usage,
    Parse,
    Schema,
    Validation,
    Refusal,
    Resource,
}

impl ErrorCategory {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Io | ErrorCategory::Usage | ErrorCategory::Parse | ErrorCategory::Schema => 2,
            ErrorCategory::Validation => 3,
            ErrorCategory::Refusal => 4,
            ErrorCategory::Resource => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Io => "io",
            ErrorCategory::Usage => "usage",
            ErrorCategory::Parse => "parse",
            ErrorCategory::Schema => "schema",
            ErrorCategory::Validation => "validation",
            ErrorCategory::Refusal => "refusal",
            ErrorCategory::Resource => "resource",
        }
    }
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub category: ErrorCategory,
    /// Field path (`queries[2].given`) or `line:column` where known.
    pub location: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn new(category: ErrorCategory, message: impl Into<String>) -> Self {
        Self {
            category,
            location: None,
            message: message.into(),
        }
    }

    pub fn at(mut self, location: impl Into<String>) -> Self {
        let location = location.into();
        self.location = (!location.is_empty()).then_some(location);
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.category.exit_code()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "error[{}]: {loc}: {}", self.category, self.message),
            None => write!(f, "error[{}]: {}", self.category, self.message),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "chronologic", version, about = "Consistent-histories analysis of quantum families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a JSON scenario file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Built-in scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Debug, Subcommand)]
enum ScenarioCommand {
    /// Run a built-in scenario and check its documented expectations.
    Run {
        name: String,
        /// Parameter override, `key=value`; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List built-in scenarios and their default parameters.
    List {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Consistency condition.
    #[arg(long, default_value_t = Condition::Medium)]
    condition: Condition,
    /// Consistency tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads for the engine.
    #[arg(long)]
    workers: Option<usize>,
}

impl EngineArgs {
    fn config(&self, max_histories: usize) -> Result<EngineConfig, CliError> {
        let mut tolerances = ToleranceConfig::default();
        if let Some(t) = self.tol {
            tolerances.consistency_tol = t;
        }
        tolerances
            .validate()
            .map_err(|e| CliError::new(ErrorCategory::Usage, e.to_string()))?;
        Ok(EngineConfig {
            tolerances,
            condition: self.condition,
            max_histories,
        })
    }

    fn install<T: Send>(&self, job: impl FnOnce() -> Result<T, CliError> + Send) -> Result<T, CliError> {
        match self.workers {
            None => job(),
            Some(0) => Err(CliError::new(ErrorCategory::Usage, "--workers must be at least 1")),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::new(ErrorCategory::Usage, e.to_string()))?
                .install(job),
        }
    }
}

fn max_histories_from_env() -> Result<usize, CliError> {
    match std::env::var(MAX_HISTORIES_ENV) {
        Err(_) => Ok(DEFAULT_MAX_HISTORIES),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::new(
                ErrorCategory::Usage,
                format!("{MAX_HISTORIES_ENV} must be a positive integer, got `{raw}`"),
            )),
        },
    }
}

fn analyze(file: &PathBuf, engine: &EngineArgs, format: Format) -> Result<Vec<u8>, CliError> {
    let config = engine.config(max_histories_from_env()?)?;
    let bytes = std::fs::read(file)
        .map_err(|e| CliError::new(ErrorCategory::Io, format!("cannot read {}: {e}", file.display())))?;
    engine.install(|| {
        let spec = parse_scenario_file(&bytes)?;
        let report = run_query(&spec, &config)?;
        Ok(format_report(&report, format))
    })
}

fn dispatch(command: Command) -> Result<Vec<u8>, CliError> {
    match command {
        Command::Analyze { file, engine, format } => analyze(&file, &engine, format),
        Command::Scenario(ScenarioCommand::Run {
            name,
            params,
            engine,
            format,
        }) => {
            let config = engine.config(max_histories_from_env()?)?;
            engine.install(|| Ok(format_report(&run_scenario(&name, &params, &config)?, format)))
        }
        Command::Scenario(ScenarioCommand::List { format }) => Ok(format_report(&catalog(), format)),
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "error[usage]: {}", text.trim_start_matches("error: "));
                ErrorCategory::Usage.exit_code()
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(cli.command) {
        Ok(bytes) => match out.write_all(&bytes).and_then(|_| out.flush()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "{}", CliError::new(ErrorCategory::Io, e.to_string()));
                ErrorCategory::Io.exit_code()
            }
        },
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}
