//! Function symbols and vocabularies.

use indexmap::IndexMap;

use crate::builtins::{self, OBLIGATORY};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolKind {
    Static,
    /// Dynamic symbols carry a static default term.
    Dynamic {
        default: Term,
    },
    External,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub relational: bool,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn new_static(name: impl Into<String>, arity: usize, relational: bool) -> Symbol {
        Symbol {
            name: name.into(),
            arity,
            relational,
            kind: SymbolKind::Static,
        }
    }

    pub fn new_dynamic(name: impl Into<String>, arity: usize, relational: bool, default: Term) -> Symbol {
        Symbol {
            name: name.into(),
            arity,
            relational,
            kind: SymbolKind::Dynamic { default },
        }
    }

    pub fn new_external(name: impl Into<String>, arity: usize, relational: bool) -> Symbol {
        Symbol {
            name: name.into(),
            arity,
            relational,
            kind: SymbolKind::External,
        }
    }

    pub fn is_static(&self) -> bool {
        matches!(self.kind, SymbolKind::Static)
    }

    pub fn is_dynamic(&self) -> bool {
        matches!(self.kind, SymbolKind::Dynamic { .. })
    }

    pub fn is_external(&self) -> bool {
        matches!(self.kind, SymbolKind::External)
    }

    pub fn default_term(&self) -> Option<&Term> {
        match &self.kind {
            SymbolKind::Dynamic { default } => Some(default),
            _ => None,
        }
    }
}

/// How a static or external symbol is interpreted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    /// An entry of the static catalog.
    Builtin(String),
    /// A nullary static constant with a fixed value.
    Const(crate::value::Value),
    /// An external chooser.
    Chooser(String),
}

/// A finite set of symbols with unique names, in declaration order.
///
/// Equality ignores order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    symbols: IndexMap<String, Symbol>,
}

impl Vocabulary {
    pub fn empty() -> Vocabulary {
        Vocabulary::default()
    }

    /// The vocabulary consisting of the obligatory symbols only.
    pub fn obligatory() -> Vocabulary {
        let mut v = Vocabulary::empty();
        for name in OBLIGATORY {
            let b = builtins::lookup_static(name).expect("obligatory builtin");
            v.insert(Symbol::new_static(*name, b.arity, b.relational));
        }
        v
    }

    pub fn is_obligatory(sym: &Symbol) -> bool {
        OBLIGATORY.contains(&sym.name.as_str())
    }

    pub fn insert(&mut self, sym: Symbol) -> Option<Symbol> {
        self.symbols.insert(sym.name.clone(), sym)
    }

    pub fn remove(&mut self, name: &str) -> Option<Symbol> {
        self.symbols.shift_remove(name)
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.symbols.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `self ⊆ other`: every symbol of `self` is in `other` with identical metadata.
    pub fn is_included_in(&self, other: &Vocabulary) -> bool {
        self.iter().all(|s| other.get(&s.name) == Some(s))
    }

    pub fn dynamic_symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.iter().filter(|s| s.is_dynamic())
    }

    /// True if every symbol in `t` is static here (literals count as static).
    pub fn is_static_term(&self, t: &Term) -> bool {
        t.symbols()
            .into_iter()
            .all(|s| self.get(s).is_some_and(Symbol::is_static))
    }

    /// True if the head of `t` is a relational symbol.
    pub fn is_relational_term(&self, t: &Term) -> bool {
        t.head().and_then(|h| self.get(h)).is_some_and(|s| s.relational)
    }
}
