//! Abstract state machines with exact-rational values, and their
//! reversification into an instrumented machine plus an inverse.

pub mod builtins;
pub mod corpus;
pub mod error;
pub mod harness;
pub mod interp;
pub mod reversify;
pub mod structure;
pub mod syntax;
pub mod term;
pub mod value;
pub mod vocab;

pub use error::Error;
pub use harness::{CheckConfig, CheckReport, SizeBounds, Verdict};
pub use interp::{
    initial_state, replay_run, run, run_from, step, update_set, ExternalCall, Oracle, StepOutcome,
    StopReason, Trace, DEFAULT_BUDGET,
};
pub use reversify::{reversify, reversify_with, Catalog, Options, Reversification};
pub use structure::{Conflict, Location, Structure, Update, UpdateSet};
pub use syntax::{parse_module, print_module, Diagnostic, Module, Seed};
pub use term::{Rule, Term};
pub use value::Value;
pub use vocab::{Binding, Symbol, SymbolKind, Vocabulary};
