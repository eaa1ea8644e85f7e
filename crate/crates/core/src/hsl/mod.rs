//! The hyperset language: systems of set equations such as `x = {x, y};`.
//!
//! ```text
//! stmt := NAME "=" term ";" | "atom" NAME ";"
//! term := NAME | "{" [term ("," term)*] "}" | "<" term "," term ("," term)* ">" | NAT
//! ```
//!
//! Pairs are Kuratowski pairs, longer tuples nest to the right and numerals
//! are von Neumann numerals. `#` starts a comment.

mod flatten;
mod parse;
mod unparse;

pub use flatten::{flatten, flatten_boffa, flatten_system, System, MAX_NUMERAL};
pub use parse::{parse, parse_term, Pos, Program, Statement, Term};
pub use unparse::{unparse, unparse_with_prefix};
