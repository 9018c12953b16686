//! `w6h`: generate ordered questionnaires, lint question documents, edit
//! pattern matrices, run elicitation sessions and serve the HTTP API.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod failure;
mod io;
mod matrix_cmd;
mod questionnaire;
mod serve;
mod session_cmd;

use failure::Failure;

#[derive(Parser)]
#[command(
    name = "w6h",
    version,
    about = "Plan requirements elicitation around the seven interrogatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export one stakeholder group's questionnaire in canonical order.
    Generate(GenerateArgs),
    /// Check a markdown questionnaire for ordering and coverage problems.
    Lint(LintArgs),
    /// Inspect, validate or extend a pattern matrix.
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Run an elicitation session stored in an event log.
    #[command(subcommand)]
    Session(SessionCommand),
    /// Serve the HTTP API and the session board.
    Serve(ServeArgs),
}

#[derive(Args, Clone)]
struct MatrixSource {
    /// Matrix document; the built-in matrix when omitted.
    #[arg(long, env = "W6H_MATRIX")]
    matrix: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GraphSource {
    /// Precedence graph document; the built-in graph when omitted.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Csv,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: MatrixSource,
    /// Group id or display name.
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value = "markdown")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LintArgs {
    doc: PathBuf,
    #[command(flatten)]
    graph: GraphSource,
    /// Also check that every matrix cell of a section's group is asked about.
    #[arg(long, env = "W6H_MATRIX")]
    matrix: Option<PathBuf>,
    /// Print findings as a JSON list.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum MatrixCommand {
    /// Print the matrix cell by cell.
    Show {
        #[command(flatten)]
        source: MatrixSource,
        /// Print the matrix document instead.
        #[arg(long)]
        json: bool,
    },
    /// Report structural problems; exits 1 if any is an error.
    Validate {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        json: bool,
    },
    /// Insert a concern into one or more cells.
    AddConcern(AddConcernArgs),
    /// Print the precedence rules and the canonical order.
    Graph {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct AddConcernArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long)]
    id: String,
    #[arg(long)]
    text: String,
    #[arg(long)]
    interrogative: String,
    /// Group id or display name; repeat for several groups.
    #[arg(long = "group", required = true)]
    groups: Vec<String>,
    #[arg(long)]
    question: Option<String>,
    #[arg(long = "tag")]
    tags: Vec<String>,
    #[arg(long)]
    gatekeeper: bool,
    #[arg(long)]
    candidates_from: Option<String>,
    /// Where to write the result. Defaults to the --matrix file, or stdout
    /// for the built-in matrix.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Triage,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerdictArg {
    Proceed,
    #[value(alias = "not_needed")]
    NotNeeded,
}

#[derive(Args, Clone)]
struct LogPath {
    /// Session event log (.w6hlog.jsonl).
    #[arg(long)]
    log: PathBuf,
}

#[derive(Subcommand)]
enum SessionCommand {
    /// Create a session log.
    Start(StartArgs),
    /// List the questions that may be asked now.
    Next {
        #[command(flatten)]
        log: LogPath,
        #[arg(long)]
        json: bool,
    },
    /// Record an answer.
    Answer {
        #[command(flatten)]
        log: LogPath,
        instance: String,
        text: String,
        /// A selected candidate or listed entity; repeatable.
        #[arg(long = "item")]
        items: Vec<String>,
        #[arg(long, value_enum)]
        verdict: Option<VerdictArg>,
    },
    /// Mark a question as deliberately not asked.
    Skip {
        #[command(flatten)]
        log: LogPath,
        instance: String,
    },
    /// Apply an answered gatekeeper's verdict to the instances with a tag.
    Gate {
        #[command(flatten)]
        log: LogPath,
        instance: String,
        #[arg(long, value_enum)]
        verdict: VerdictArg,
        #[arg(long)]
        tag: String,
    },
    /// Print per-cell coverage.
    Report {
        #[command(flatten)]
        log: LogPath,
        #[arg(long)]
        json: bool,
    },
    /// Print the entity by function link matrix.
    Links {
        #[command(flatten)]
        log: LogPath,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct StartArgs {
    #[command(flatten)]
    log: LogPath,
    #[command(flatten)]
    source: MatrixSource,
    #[command(flatten)]
    graph: GraphSource,
    /// Group id or display name; repeat for several groups.
    #[arg(long = "group", required = true)]
    groups: Vec<String>,
    /// Narrow every group to concerns carrying this tag.
    #[arg(long)]
    tag: Option<String>,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    /// Session id; defaults to the log file name.
    #[arg(long)]
    id: Option<String>,
    /// Overwrite an existing log.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    #[command(flatten)]
    source: MatrixSource,
    #[command(flatten)]
    graph: GraphSource,
    /// Persist the matrix and session logs here.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Built board assets to serve at `/`.
    #[arg(long)]
    assets: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Generate(args) => questionnaire::generate(args),
        Command::Lint(args) => questionnaire::lint(args),
        Command::Matrix(cmd) => matrix_cmd::run(cmd),
        Command::Session(cmd) => session_cmd::run(cmd),
        Command::Serve(args) => serve::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("w6h: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
