//! Loading inputs and solving them under a mode. Shared by the batch
//! subcommands and the REPL.

use std::fmt;
use std::io::Read;
use std::path::Path;

use clap::ValueEnum;
use hyperset::boffa::{SetId, Universe};
use hyperset::canon::{self, canonicalize_with};
use hyperset::hsl::{self, Program};
use hyperset::{Apg, Error, Limits, Semantics};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Afa,
    Safa,
    Fafa,
    Boffa,
}

impl Mode {
    pub fn semantics(self) -> Option<Semantics> {
        match self {
            Mode::Afa => Some(Semantics::Afa),
            Mode::Safa => Some(Semantics::Safa),
            Mode::Fafa => Some(Semantics::Fafa),
            Mode::Boffa => None,
        }
    }

    pub fn parse(text: &str) -> Result<Mode, CliError> {
        <Mode as ValueEnum>::from_str(text.trim(), true).map_err(|_| {
            CliError::Usage(format!(
                "unknown mode `{}` (expected afa, safa, fafa or boffa)",
                text.trim()
            ))
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Afa => "afa",
            Mode::Safa => "safa",
            Mode::Fafa => "fafa",
            Mode::Boffa => "boffa",
        })
    }
}

/// A parsed input file: an equation system, or a single JSON graph bound to
/// the file stem.
#[derive(Debug, Clone)]
pub enum Input {
    Program(Program),
    Graph(String, Apg),
}

pub fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

pub fn load(path: &str) -> Result<Input, CliError> {
    let text = read_source(path)?;
    let is_json = path.ends_with(".json") || text.trim_start().starts_with('{');
    if is_json {
        let g = Apg::from_json_str(&text)?;
        let stem = Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .filter(|s| path != "-" && !s.is_empty())
            .unwrap_or_else(|| "g".to_string());
        Ok(Input::Graph(stem, g))
    } else {
        Ok(Input::Program(hsl::parse(&text)?))
    }
}

/// What a name denotes once the input is flattened.
#[derive(Debug, Clone)]
pub enum Solved {
    Graphs(Vec<(String, Apg)>),
    Boffa(Universe, Vec<(String, SetId)>),
}

impl Solved {
    pub fn names(&self) -> Vec<&str> {
        match self {
            Solved::Graphs(g) => g.iter().map(|(n, _)| n.as_str()).collect(),
            Solved::Boffa(_, ids) => ids.iter().map(|(n, _)| n.as_str()).collect(),
        }
    }

    /// The graph presenting `name`: the flattened graph, or the picture of
    /// the stored set in Boffa mode.
    pub fn picture(&self, name: &str) -> Result<Apg, CliError> {
        match self {
            Solved::Graphs(graphs) => graphs
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, g)| g.clone())
                .ok_or_else(|| Error::UndefinedName(name.to_string()).into()),
            Solved::Boffa(u, _) => Ok(u.picture_of(self.id(name)?)?),
        }
    }

    pub fn id(&self, name: &str) -> Result<SetId, CliError> {
        match self {
            Solved::Boffa(_, ids) => ids
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, id)| *id)
                .ok_or_else(|| Error::UndefinedName(name.to_string()).into()),
            Solved::Graphs(_) => Err(CliError::Usage("set ids exist only in boffa mode".into())),
        }
    }
}

pub fn solve(input: &Input, mode: Mode) -> Result<Solved, CliError> {
    match (input, mode) {
        (Input::Program(p), Mode::Boffa) => {
            let mut u = Universe::new();
            let ids = hsl::flatten_boffa(p, &mut u)?;
            Ok(Solved::Boffa(u, ids))
        }
        (Input::Program(p), _) => Ok(Solved::Graphs(hsl::flatten(p)?)),
        (Input::Graph(name, g), Mode::Boffa) => {
            let mut u = Universe::new();
            let id = u.insert_apg(g)?;
            Ok(Solved::Boffa(u, vec![(name.clone(), id)]))
        }
        (Input::Graph(name, g), _) => Ok(Solved::Graphs(vec![(name.clone(), g.clone())])),
    }
}

/// The canonical picture of `name` under `mode`; in Boffa mode the picture of
/// the stored set, which is already extensional and unique.
pub fn canonical(solved: &Solved, name: &str, mode: Mode, limits: &Limits) -> Result<Apg, CliError> {
    let g = solved.picture(name)?;
    match mode.semantics() {
        Some(s) => Ok(canonicalize_with(&g, s, limits)?.canonical),
        None => Ok(g),
    }
}

pub fn equal(solved: &Solved, a: &str, b: &str, mode: Mode, limits: &Limits) -> Result<bool, CliError> {
    match mode.semantics() {
        Some(s) => Ok(canon::equal_with(&solved.picture(a)?, &solved.picture(b)?, s, limits)?),
        None => Ok(solved.id(a)? == solved.id(b)?),
    }
}

/// Limits from `--cap`, else `HS_CAP`, else the library defaults. One cap
/// bounds both search size and levelled-universe size.
pub fn limits(cap: Option<usize>) -> Limits {
    let mut limits = Limits::default();
    if let Some(cap) = cap {
        limits.iso_nodes = cap;
        limits.wf_elements = cap;
    }
    limits
}
