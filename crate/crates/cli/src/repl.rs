//! Line-oriented session. Definitions accumulate in one program, which is
//! re-flattened for every directive. Errors are reported and never end the
//! session.

use std::io::{BufRead, IsTerminal, Write};
use std::path::PathBuf;

use hyperset::canon::{is_rigid_with, to_dot};
use hyperset::hsl::{self, unparse_with_prefix, Program};
use hyperset::Limits;

use crate::commands::aut_of;
use crate::session::{self, Input, Mode, Solved};
use crate::CliError;

pub enum Flow {
    Continue(String),
    Quit,
}

const HELP: &str = "\
definitions:   name = term;   atom name;   (a statement may span lines)
:eq A B        equality under the current mode
:canon A       canonical equation system
:aut A         automorphism group order of the picture
:rigid A       whether the picture is rigid
:picture A [PATH]  write the picture as DOT (default A.dot)
:mode M        switch to afa, safa, fafa or boffa and re-solve
:list          defined names
:quit          leave
";

pub struct Repl {
    pub program: Program,
    pub mode: Mode,
    pub limits: Limits,
    pub dot: Option<PathBuf>,
    pending: String,
}

impl Repl {
    pub fn new(mode: Mode, limits: Limits, dot: Option<PathBuf>) -> Repl {
        Repl {
            program: Program::default(),
            mode,
            limits,
            dot,
            pending: String::new(),
        }
    }

    /// Handles one input line; errors come back as `error: ...` output.
    pub fn handle_line(&mut self, line: &str) -> Flow {
        match self.step(line) {
            Ok(flow) => flow,
            Err(e) => Flow::Continue(format!("error: {e}\n")),
        }
    }

    fn step(&mut self, line: &str) -> Result<Flow, CliError> {
        let trimmed = line.trim();
        if self.pending.is_empty() {
            if let Some(directive) = trimmed.strip_prefix(':') {
                return self.directive(directive);
            }
            if trimmed.is_empty() || trimmed.starts_with('#') {
                return Ok(Flow::Continue(String::new()));
            }
        }
        self.pending.push_str(line);
        self.pending.push('\n');
        let code = self.pending.split('#').next().unwrap_or("").trim_end();
        if !code.ends_with(';') {
            return Ok(Flow::Continue(String::new()));
        }
        let text = std::mem::take(&mut self.pending);
        let fragment = hsl::parse(&text)?;
        for statement in fragment.statements {
            self.program.upsert(statement);
        }
        Ok(Flow::Continue(String::new()))
    }

    fn solved(&self) -> Result<Solved, CliError> {
        session::solve(&Input::Program(self.program.clone()), self.mode)
    }

    fn directive(&mut self, text: &str) -> Result<Flow, CliError> {
        let mut words = text.split_whitespace();
        let command = words.next().unwrap_or("");
        let args: Vec<&str> = words.collect();
        let want = |n: usize| -> Result<(), CliError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(CliError::Usage(format!(":{command} takes {n} argument(s)")))
            }
        };
        let out = match command {
            "quit" | "q" => return Ok(Flow::Quit),
            "help" | "h" => HELP.to_string(),
            "list" => {
                let names: Vec<&str> = self.program.names().collect();
                format!("{}\n", names.join(" "))
            }
            "mode" => {
                want(1)?;
                let mode = Mode::parse(args[0])?;
                // the switch sticks even if the program does not solve under it
                self.mode = mode;
                match self.solved() {
                    Ok(solved) => format!("mode {mode}: {} names\n", solved.names().len()),
                    Err(e) => format!("mode {mode}\nerror: {e}\n"),
                }
            }
            "eq" => {
                want(2)?;
                let solved = self.solved()?;
                let equal = session::equal(&solved, args[0], args[1], self.mode, &self.limits)?;
                format!("{}\n", if equal { "equal" } else { "unequal" })
            }
            "canon" => {
                want(1)?;
                let solved = self.solved()?;
                let c = session::canonical(&solved, args[0], self.mode, &self.limits)?;
                unparse_with_prefix(&c, &format!("{}_", args[0]))
            }
            "aut" => {
                want(1)?;
                let report = aut_of(&self.solved()?, args[0], self.mode, &self.limits)?;
                let mut out = format!("order {}\n", report.order);
                for g in &report.generators {
                    out.push_str(&format!("generator: {g}\n"));
                }
                out
            }
            "rigid" => {
                want(1)?;
                let g = self.solved()?.picture(args[0])?;
                format!(
                    "{}\n",
                    if is_rigid_with(&g, &self.limits)? {
                        "rigid"
                    } else {
                        "not rigid"
                    }
                )
            }
            "picture" => {
                if args.is_empty() || args.len() > 2 {
                    return Err(CliError::Usage(":picture takes a name and an optional path".into()));
                }
                let g = self.solved()?.picture(args[0])?;
                let path = match args.get(1) {
                    Some(p) => PathBuf::from(p),
                    None => self
                        .dot
                        .clone()
                        .unwrap_or_else(|| PathBuf::from(format!("{}.dot", args[0]))),
                };
                std::fs::write(&path, to_dot(&g)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                format!("wrote {}\n", path.display())
            }
            other => return Err(CliError::Usage(format!("unknown directive :{other} (try :help)"))),
        };
        Ok(Flow::Continue(out))
    }

    pub fn run(&mut self, input: impl BufRead, mut output: impl Write) -> std::io::Result<()> {
        let prompt = std::io::stdin().is_terminal();
        if prompt {
            write!(output, "> ")?;
            output.flush()?;
        }
        for line in input.lines() {
            match self.handle_line(&line?) {
                Flow::Quit => return Ok(()),
                Flow::Continue(text) => write!(output, "{text}")?,
            }
            if prompt {
                write!(output, "{}", if self.pending.is_empty() { "> " } else { ". " })?;
            }
            output.flush()?;
        }
        if !self.pending.is_empty() {
            writeln!(output, "error: unterminated statement at end of input")?;
        }
        Ok(())
    }
}
