//! Command-line front end. [`run`] takes its streams explicitly so the
//! binary and the test suites share one code path.

pub mod wizard;

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dsl::{format, parse, ParseError};
use crate::evalkit::{read_defect_forms, read_tam_responses, summarize_defects, summarize_tam, EvalError};
use crate::lint::{lint_project_with, LintConfig, Severity};
use crate::metrics::{action_count, project_metrics, PathOptions};
use crate::model::{build_graph, Project, StructureCode};
use crate::render::to_dot;

pub const CONFIG_ENV: &str = "STARTFLOW_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExitStatus(pub i32);

impl ExitStatus {
    pub const CLEAN: ExitStatus = ExitStatus(0);
    /// Defects at or above the failure threshold, or non-canonical input
    /// under `fmt --check`.
    pub const FINDINGS: ExitStatus = ExitStatus(1);
    pub const INVALID: ExitStatus = ExitStatus(2);
    pub const USAGE: ExitStatus = ExitStatus(3);

    pub fn code(self) -> i32 {
        self.0
    }
}

/// Streams and environment for one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    pub stdin_is_terminal: bool,
    /// Value of `STARTFLOW_CONFIG`, if set.
    pub env_config: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "startflow",
    version,
    about = "Wireflow linter, metrics and evaluation toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, validate and lint a wireflow file
    Check(CheckArgs),
    /// Print the canonical form of a wireflow file
    Fmt(FmtArgs),
    /// Export flows as a Graphviz DOT document
    Graph(GraphArgs),
    /// Action counts, shortest paths and reachability
    Metrics(MetricsArgs),
    /// Guided feature / wireflow / verification session
    Wizard(wizard::WizardArgs),
    /// Summarize heuristic-evaluation defect forms
    Eval(EvalArgs),
    /// Summarize TAM questionnaire responses
    Tam(TamArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    path: PathBuf,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
    /// Lowest severity (1-4 or cosmetic/minor/major/catastrophic) that fails the run
    #[arg(long, default_value = "3")]
    fail_on: Severity,
    /// Lint configuration file (JSON); overrides STARTFLOW_CONFIG and the project's config block
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for linting features
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args)]
struct FmtArgs {
    path: PathBuf,
    /// Exit 1 if the file is not already canonical
    #[arg(long)]
    check: bool,
    /// Rewrite the file in place
    #[arg(long, conflicts_with = "check")]
    write: bool,
}

#[derive(Debug, Args)]
struct GraphArgs {
    path: PathBuf,
    /// Only render this feature
    #[arg(long)]
    feature: Option<String>,
    /// Write to a file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    path: PathBuf,
    /// Print the action count of one declared task
    #[arg(long)]
    task: Option<String>,
    /// Ignore error and back connectors when searching for shortest paths
    #[arg(long)]
    forward_only: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    csv: PathBuf,
    #[arg(long)]
    group: String,
}

#[derive(Debug, Args)]
struct TamArgs {
    csv: PathBuf,
    #[arg(long)]
    group: String,
}

/// Failure of a command, mapped onto an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    fn status(&self) -> ExitStatus {
        match self {
            CliError::Invalid(_) => ExitStatus::INVALID,
            _ => ExitStatus::USAGE,
        }
    }
}

pub type CliResult = Result<ExitStatus, CliError>;

pub fn run<I, T>(args: I, io: &mut Io<'_>) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                ExitStatus::USAGE
            } else {
                ExitStatus::CLEAN
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { io.stderr } else { io.stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => cmd_check(a, io),
        Command::Fmt(a) => cmd_fmt(a, io),
        Command::Graph(a) => cmd_graph(a, io),
        Command::Metrics(a) => cmd_metrics(a, io),
        Command::Wizard(a) => wizard::cmd_wizard(a, io),
        Command::Eval(a) => cmd_eval(a, io),
        Command::Tam(a) => cmd_tam(a, io),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.status()
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_errors_text(path: &Path, errors: &[ParseError]) -> String {
    errors
        .iter()
        .map(|e| format!("{}:{}: {}: {}\n", path.display(), e.span, e.code, e.message))
        .collect()
}

/// Reads and parses a wireflow file; parse errors are printed to stderr.
pub(crate) fn load_project(path: &Path, io: &mut Io<'_>) -> Result<Project, CliError> {
    let src = read_file(path)?;
    parse(&src).map_err(|errors| {
        let _ = io.stderr.write_all(parse_errors_text(path, &errors).as_bytes());
        let n = errors.len();
        CliError::Invalid(format!("{n} parse error{}", if n == 1 { "" } else { "s" }))
    })
}

fn effective_config(explicit: Option<&Path>, io: &Io<'_>, project: &Project) -> Result<LintConfig, CliError> {
    let path = explicit.or(io.env_config.as_deref());
    match path {
        Some(p) => LintConfig::load(p).map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(project.config.clone()),
    }
}

fn cmd_check(args: CheckArgs, io: &mut Io<'_>) -> CliResult {
    let project = load_project(&args.path, io)?;
    let config = effective_config(args.config.as_deref(), io, &project)?;
    let threads = args.threads.max(1);
    let report = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| lint_project_with(&project, &config, true))
    } else {
        lint_project_with(&project, &config, false)
    };
    let text = if args.json { report.to_json() } else { report.to_text() };
    io.stdout.write_all(text.as_bytes())?;
    // E-CONN-SRC is mirrored by an R8 defect and follows the threshold.
    let blocking = report
        .structure
        .iter()
        .any(|e| e.code != StructureCode::ConnectorSource);
    Ok(if blocking {
        ExitStatus::INVALID
    } else if report.max_severity().is_some_and(|s| s >= args.fail_on) {
        ExitStatus::FINDINGS
    } else {
        ExitStatus::CLEAN
    })
}

fn cmd_fmt(args: FmtArgs, io: &mut Io<'_>) -> CliResult {
    let src = read_file(&args.path)?;
    let project = parse(&src).map_err(|errors| {
        let _ = io.stderr.write_all(parse_errors_text(&args.path, &errors).as_bytes());
        CliError::Invalid("cannot format a file with parse errors".into())
    })?;
    let canonical = format(&project);
    if args.check {
        if canonical == src {
            return Ok(ExitStatus::CLEAN);
        }
        writeln!(io.stderr, "{}: not in canonical form", args.path.display())?;
        return Ok(ExitStatus::FINDINGS);
    }
    if args.write {
        fs::write(&args.path, canonical)?;
    } else {
        io.stdout.write_all(canonical.as_bytes())?;
    }
    Ok(ExitStatus::CLEAN)
}

fn cmd_graph(args: GraphArgs, io: &mut Io<'_>) -> CliResult {
    let project = load_project(&args.path, io)?;
    let doc = to_dot(&project, args.feature.as_deref()).map_err(|e| CliError::Usage(e.to_string()))?;
    match args.output {
        Some(out) => fs::write(out, doc.text)?,
        None => io.stdout.write_all(doc.text.as_bytes())?,
    }
    Ok(ExitStatus::CLEAN)
}

fn cmd_metrics(args: MetricsArgs, io: &mut Io<'_>) -> CliResult {
    let project = load_project(&args.path, io)?;
    let options = if args.forward_only {
        PathOptions::forward_only()
    } else {
        PathOptions::default()
    };
    if let Some(name) = &args.task {
        let (feature, task) = project
            .task(name)
            .ok_or_else(|| CliError::Usage(format!("no task named `{name}`")))?;
        let flow = build_graph(feature, &project).map_err(|e| CliError::Invalid(e.to_string()))?;
        let n = action_count(task, &flow).map_err(|e| CliError::Invalid(e.to_string()))?;
        writeln!(io.stdout, "{n}")?;
        return Ok(ExitStatus::CLEAN);
    }
    let table = project_metrics(&project, options).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut json = serde_json::to_string_pretty(&table).expect("metrics serialize");
    json.push('\n');
    io.stdout.write_all(json.as_bytes())?;
    Ok(ExitStatus::CLEAN)
}

fn eval_error(path: &Path, e: EvalError) -> CliError {
    CliError::Invalid(format!("{}: {e}", path.display()))
}

fn cmd_eval(args: EvalArgs, io: &mut Io<'_>) -> CliResult {
    let text = read_file(&args.csv)?;
    let forms = read_defect_forms(text.as_bytes()).map_err(|e| eval_error(&args.csv, e))?;
    let summary = summarize_defects(&forms, &args.group).map_err(|e| eval_error(&args.csv, e))?;
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    io.stdout.write_all(json.as_bytes())?;
    Ok(ExitStatus::CLEAN)
}

fn cmd_tam(args: TamArgs, io: &mut Io<'_>) -> CliResult {
    let text = read_file(&args.csv)?;
    let responses = read_tam_responses(text.as_bytes()).map_err(|e| eval_error(&args.csv, e))?;
    let summary = summarize_tam(&responses, &args.group).map_err(|e| eval_error(&args.csv, e))?;
    io.stdout.write_all(summary.to_json().as_bytes())?;
    Ok(ExitStatus::CLEAN)
}

/// Captured result of an in-memory invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Captured {
    pub status: ExitStatus,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI with empty, non-terminal stdin and captured output.
pub fn run_captured<I, T>(args: I, env_config: Option<PathBuf>) -> Captured
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut stdin: &[u8] = &[];
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let status = {
        let mut io = Io {
            stdin: &mut stdin,
            stdout: &mut stdout,
            stderr: &mut stderr,
            stdin_is_terminal: false,
            env_config,
        };
        run(args, &mut io)
    };
    Captured {
        status,
        stdout: String::from_utf8_lossy(&stdout).into_owned(),
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
    }
}
