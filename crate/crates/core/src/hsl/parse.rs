use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Name(String, Pos),
    Set(Vec<Term>),
    /// At least two components; right-nested pairs.
    Tuple(Vec<Term>),
    Nat(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Define { name: String, term: Term, pos: Pos },
    Atom { name: String, pos: Pos },
}

impl Statement {
    pub fn name(&self) -> &str {
        match self {
            Statement::Define { name, .. } | Statement::Atom { name, .. } => name,
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            Statement::Define { pos, .. } | Statement::Atom { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub statements: Vec<Statement>,
}

impl Program {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.statements.iter().map(Statement::name)
    }

    pub fn get(&self, name: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.name() == name)
    }

    pub fn has_atoms(&self) -> bool {
        self.statements.iter().any(|s| matches!(s, Statement::Atom { .. }))
    }

    /// Appends the statements of `other`, rejecting names defined twice.
    pub fn extend(&mut self, other: Program) -> Result<()> {
        for s in other.statements {
            if self.get(s.name()).is_some() {
                let pos = s.pos();
                return Err(Error::DuplicateDefinition {
                    name: s.name().to_string(),
                    line: pos.line,
                    column: pos.column,
                });
            }
            self.statements.push(s);
        }
        Ok(())
    }

    /// Replaces the statement for an existing name or appends a new one.
    pub fn upsert(&mut self, statement: Statement) {
        match self.statements.iter_mut().find(|s| s.name() == statement.name()) {
            Some(slot) => *slot = statement,
            None => self.statements.push(statement),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Atom,
    Eq,
    Semi,
    Comma,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "name `{s}`"),
            Tok::Nat(n) => write!(f, "number {n}"),
            Tok::Atom => f.write_str("`atom`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LAngle => f.write_str("`<`"),
            Tok::RAngle => f.write_str("`>`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };
    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut pos);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                advance(c, &mut pos);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
                    break;
                }
                word.push(c);
                chars.next();
                advance(c, &mut pos);
            }
            let tok = if word == "atom" { Tok::Atom } else { Tok::Ident(word) };
            out.push((tok, start));
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&c) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                digits.push(c);
                chars.next();
                advance(c, &mut pos);
            }
            let n = digits
                .parse()
                .map_err(|_| syntax(start, format!("number {digits} is too large")))?;
            out.push((Tok::Nat(n), start));
            continue;
        }
        let tok = match c {
            '=' => Tok::Eq,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '<' => Tok::LAngle,
            '>' => Tok::RAngle,
            other => return Err(syntax(start, format!("unexpected character {other:?}"))),
        };
        chars.next();
        advance(c, &mut pos);
        out.push((tok, start));
    }
    out.push((Tok::Eof, pos));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos> {
        let (tok, pos) = self.bump();
        if tok == want {
            Ok(pos)
        } else {
            Err(syntax(pos, format!("expected {want}, found {tok}")))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos)> {
        match self.bump() {
            (Tok::Ident(name), pos) => Ok((name, pos)),
            (tok, pos) => Err(syntax(pos, format!("expected a name, found {tok}"))),
        }
    }

    fn statement(&mut self) -> Result<Statement> {
        if self.peek().0 == Tok::Atom {
            self.bump();
            let (name, pos) = self.ident()?;
            self.expect(Tok::Semi)?;
            return Ok(Statement::Atom { name, pos });
        }
        let (name, pos) = self.ident()?;
        self.expect(Tok::Eq)?;
        let term = self.term()?;
        self.expect(Tok::Semi)?;
        Ok(Statement::Define { name, term, pos })
    }

    fn term(&mut self) -> Result<Term> {
        match self.bump() {
            (Tok::Ident(name), pos) => Ok(Term::Name(name, pos)),
            (Tok::Nat(n), _) => Ok(Term::Nat(n)),
            (Tok::LBrace, _) => {
                let mut items = Vec::new();
                if self.peek().0 == Tok::RBrace {
                    self.bump();
                    return Ok(Term::Set(items));
                }
                loop {
                    items.push(self.term()?);
                    match self.bump() {
                        (Tok::Comma, _) => continue,
                        (Tok::RBrace, _) => return Ok(Term::Set(items)),
                        (tok, pos) => return Err(syntax(pos, format!("expected `,` or `}}`, found {tok}"))),
                    }
                }
            }
            (Tok::LAngle, open) => {
                let mut items = vec![self.term()?];
                loop {
                    match self.bump() {
                        (Tok::Comma, _) => items.push(self.term()?),
                        (Tok::RAngle, _) if items.len() >= 2 => return Ok(Term::Tuple(items)),
                        (Tok::RAngle, _) => return Err(syntax(open, "tuples need at least two components")),
                        (tok, pos) => return Err(syntax(pos, format!("expected `,` or `>`, found {tok}"))),
                    }
                }
            }
            (tok, pos) => Err(syntax(pos, format!("expected a term, found {tok}"))),
        }
    }
}

/// Parses a program. Names must be unique; references are resolved later,
/// so forward and self references are fine here.
pub fn parse(text: &str) -> Result<Program> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let mut statements = Vec::new();
    let mut seen: BTreeMap<String, Pos> = BTreeMap::new();
    while p.peek().0 != Tok::Eof {
        let s = p.statement()?;
        if seen.insert(s.name().to_string(), s.pos()).is_some() {
            return Err(Error::DuplicateDefinition {
                name: s.name().to_string(),
                line: s.pos().line,
                column: s.pos().column,
            });
        }
        statements.push(s);
    }
    Ok(Program { statements })
}

/// Parses a single term, e.g. for REPL queries.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let t = p.term()?;
    match p.bump() {
        (Tok::Eof, _) => Ok(t),
        (tok, pos) => Err(syntax(pos, format!("unexpected {tok} after term"))),
    }
}
