//! The `.asm` module format.
//!
//! ```text
//! module sort
//!
//! static fn m/0 = 3
//! static fn </2 relational
//! dynamic fn k/0 default 0
//! dynamic fn f/1 default nil
//! external fn R/1 = @choose
//! init f(0) = 3
//! input x
//! output o
//!
//! program
//!   if k < m then par { k := k + 1; f(k) := 0 }
//! ```
//!
//! Obligatory symbols are always present and never printed.

mod lexer;
mod parser;
mod printer;
mod validate;

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;

use crate::structure::Location;
use crate::term::{Rule, Term};
use crate::value::Value;
use crate::vocab::{Binding, Vocabulary};

pub use parser::{parse_module, parse_seeds, parse_term, parse_value, parse_values};
pub use printer::{print_module, print_rule, print_term};
pub use validate::validate;

/// An initial-state seed `f(args) = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub symbol: String,
    pub args: Vec<Value>,
    pub value: Value,
}

impl Seed {
    pub fn new(symbol: impl Into<String>, args: Vec<Value>, value: Value) -> Seed {
        Seed {
            symbol: symbol.into(),
            args,
            value,
        }
    }

    pub fn location(&self) -> Location {
        Location::new(self.symbol.clone(), self.args.clone())
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.location(), self.value)
    }
}

/// Input variables and the output variable of a function-computing module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Io {
    pub inputs: Vec<String>,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    pub name: String,
    /// Includes the obligatory symbols.
    pub vocab: Vocabulary,
    /// Explicit bindings of static and external symbols.
    pub bindings: IndexMap<String, Binding>,
    pub init: Vec<Seed>,
    pub program: Rule,
    pub io: Option<Io>,
}

impl Module {
    pub fn new(name: impl Into<String>, vocab: Vocabulary, program: Rule) -> Module {
        Module {
            name: name.into(),
            vocab,
            bindings: IndexMap::new(),
            init: Vec::new(),
            program,
            io: None,
        }
    }

    /// Rebinds a static symbol, e.g. a nullary constant to a new value.
    pub fn bind(&mut self, symbol: impl Into<String>, binding: Binding) {
        self.bindings.insert(symbol.into(), binding);
    }

    /// Replaces or adds an init seed for the seed's location.
    pub fn set_seed(&mut self, seed: Seed) {
        match self
            .init
            .iter_mut()
            .find(|s| s.symbol == seed.symbol && s.args == seed.args)
        {
            Some(s) => s.value = seed.value,
            None => self.init.push(seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// A problem found while parsing or validating. Line and column are 1-based;
/// 0 means the position is unknown (modules built in memory).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn error(line: usize, col: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line,
            col,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    /// `file:line:col: severity: message`
    pub fn render(&self, file: &str) -> String {
        format!(
            "{file}:{}:{}: {}: {}",
            self.line, self.col, self.severity, self.message
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.line, self.col, self.severity, self.message
        )
    }
}

/// Where in a module a validation problem sits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Site {
    Module,
    Symbol(String),
    Binding(String),
    Init(usize),
    Io,
    Rule(Vec<usize>),
}

pub(crate) type Spans = HashMap<Site, (usize, usize)>;

pub(crate) const KEYWORDS: &[&str] = &[
    "module",
    "static",
    "dynamic",
    "external",
    "fn",
    "relational",
    "default",
    "init",
    "input",
    "output",
    "program",
    "skip",
    "par",
    "if",
    "then",
    "else",
    "and",
    "or",
    "not",
    "true",
    "false",
    "nil",
];

/// Binary symbols written infix.
pub(crate) const INFIX: &[&str] = &["+", "-", "*", "/", "<", ">", "<=", ">=", "="];

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Names the parser accepts for a declared symbol.
pub(crate) fn is_symbol_name(s: &str) -> bool {
    (is_identifier(s) && !KEYWORDS.contains(&s))
        || INFIX.contains(&s)
        || crate::builtins::OBLIGATORY.contains(&s)
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_module(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_rule(self))
    }
}

#[cfg(test)]
mod tests;
