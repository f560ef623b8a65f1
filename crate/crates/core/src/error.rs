use thiserror::Error;

use crate::structure::{Conflict, Location};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), got {got}")]
    Arity {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("external `{0}` evaluated without an oracle")]
    NoOracle(String),
    #[error("external log has no value for {} at step {step}", Location { symbol: symbol.clone(), args: args.clone() })]
    LogMiss {
        step: usize,
        symbol: String,
        args: Vec<Value>,
    },
    #[error("contradictory update set: {0}")]
    Contradictory(Box<Conflict>),
    #[error("`{0}` is not a dynamic symbol")]
    NotDynamic(String),
    #[error("relational location {0} cannot hold non-boolean {1}")]
    NonBoolean(Box<Location>, Value),
    #[error("vocabulary not included: {0}")]
    NotIncluded(String),
    #[error("symbol `{0}` added by an expansion must be dynamic")]
    NonDynamicExpansion(String),
    #[error("static `{0}` has no interpretation")]
    Unbound(String),
    #[error("{0}")]
    Invalid(String),
}
