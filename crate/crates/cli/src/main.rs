//! `hyperset`: solve, compare and inspect hyperset equation systems.
//!
//! Exit codes: 0 success, 1 syntax error, 2 semantic or usage error,
//! 3 size cap exceeded, 10 `eq` found the sets unequal, 11
//! `search-separation` found no witness.

mod commands;
mod repl;
mod session;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperset::Error;
use serde::Serialize;

use commands::{Outcome, WfArgs};
use session::Mode;

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Parse(String),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Parse(m) | CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Lib(Error::Syntax { .. } | Error::DuplicateDefinition { .. } | Error::Json(_)) => 1,
            CliError::Lib(
                Error::SizeLimitExceeded { .. } | Error::GroupTooLarge { .. } | Error::OrderTooLarge { .. },
            ) => 3,
            CliError::Lib(_) | CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hyperset",
    version,
    about = "Finite hypersets under AFA, SAFA, FAFA and Boffa semantics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Semantics deciding set equality.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Afa)]
    mode: Mode,

    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Also write the relevant graphs to PATH in Graphviz format.
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest random graph tried by search-separation.
    #[arg(long, global = true, default_value_t = 6)]
    max_nodes: usize,

    /// Size cap for isomorphism search and levelled universes.
    #[arg(long, global = true, env = "HS_CAP")]
    cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical form of every named set and all pairwise equalities.
    Solve {
        /// `.hs-set` program or JSON graph; `-` reads stdin.
        file: String,
    },
    /// Whether two names denote the same set (exit 0 equal, 10 unequal).
    Eq { file: String, left: String, right: String },
    /// Automorphism group of a set's picture.
    Aut {
        file: String,
        /// Defaults to the first name in the file.
        name: Option<String>,
    },
    /// Levelled universe over Quine atoms and lifted atom maps.
    Wf {
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        /// Atom permutation in cycle notation, e.g. "(0 1)".
        #[arg(long)]
        perm: Option<String>,
        /// Atom images as a list, e.g. "1,2".
        #[arg(long, value_delimiter = ',')]
        images: Option<Vec<usize>>,
        /// Atom count of the target stage.
        #[arg(long)]
        into: Option<usize>,
        /// Embed into a stage with M atoms, sending atom i to atom i.
        #[arg(long, value_name = "M", conflicts_with_all = ["perm", "images", "into"])]
        embed_into: Option<usize>,
        /// Accepted for compatibility; the full report is always printed.
        #[arg(long)]
        report: bool,
    },
    /// Transitive set whose automorphism group is the given group.
    #[command(group = clap::ArgGroup::new("which").required(true))]
    Group {
        /// A preset (z1, z2, z3, z4, v4, s3) or a JSON table file.
        #[arg(group = "which")]
        group: Option<String>,
        #[arg(long, group = "which")]
        preset: Option<String>,
        /// JSON file `{"order": n, "table": [[...]]}`.
        #[arg(long, group = "which")]
        table: Option<String>,
    },
    /// Random pairs on which two modes disagree (exit 0 found, 11 none).
    SearchSeparation {
        first: Mode,
        second: Mode,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Interactive session; definitions accumulate.
    Repl,
}

fn emit<R: Serialize + fmt::Display>(cli: &Cli, outcome: Outcome<R>) -> Result<u8, CliError> {
    if let Some(path) = &cli.dot {
        std::fs::write(path, commands::dot_of(&outcome.pictures))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let text = if cli.json {
        let mut s = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        outcome.report.to_string()
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
    Ok(outcome.exit)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let limits = session::limits(cli.cap);
    match &cli.command {
        Command::Solve { file } => emit(cli, commands::solve(&session::load(file)?, cli.mode, &limits)?),
        Command::Eq { file, left, right } => emit(
            cli,
            commands::eq(&session::load(file)?, left, right, cli.mode, &limits)?,
        ),
        Command::Aut { file, name } => emit(
            cli,
            commands::aut(&session::load(file)?, name.as_deref(), cli.mode, &limits)?,
        ),
        Command::Wf {
            atoms,
            levels,
            perm,
            images,
            into,
            embed_into,
            report: _,
        } => {
            let identity: Vec<usize> = (0..*atoms).collect();
            let args = WfArgs {
                atoms: *atoms,
                levels: *levels,
                perm: perm.as_deref(),
                images: if embed_into.is_some() {
                    Some(&identity)
                } else {
                    images.as_deref()
                },
                into: embed_into.or(*into),
            };
            emit(cli, commands::wf(&args, &limits)?)
        }
        Command::Group { group, preset, table } => {
            let which = group
                .as_ref()
                .or(preset.as_ref())
                .or(table.as_ref())
                .expect("clap requires one");
            emit(cli, commands::group(which, &limits)?)
        }
        Command::SearchSeparation { first, second, budget } => emit(
            cli,
            commands::search_separation(*first, *second, cli.max_nodes, cli.seed, *budget, &limits)?,
        ),
        Command::Repl => {
            let mut repl = repl::Repl::new(cli.mode, limits, cli.dot.clone());
            repl.run(std::io::stdin().lock(), std::io::stdout().lock())
                .map_err(|e| CliError::Io(e.to_string()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
