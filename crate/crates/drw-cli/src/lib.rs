//! Shared pieces of the `drw` command line: the expression language, JSON
//! serialization, and the randomized check drivers.

pub mod checks;
pub mod expr;
pub mod json;

use drw::DrwError;
use thiserror::Error;

/// Errors surfaced to the terminal; every variant is a usage problem.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("literal supplies {0} weight entries for {1} variable(s)")]
    EntryCount(usize, usize),
    #[error("cannot parse '{0}' as a rational")]
    BadRational(String),
    #[error(transparent)]
    Element(#[from] DrwError),
}
