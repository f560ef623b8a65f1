//! States: structures, locations, updates, and term evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use im::OrdMap;
use indexmap::IndexMap;
use serde::Serialize;

use crate::builtins::{self, BuiltinFn, Chooser};
use crate::error::Error;
use crate::term::Term;
use crate::value::Value;
use crate::vocab::{Binding, Symbol, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Location {
    pub symbol: String,
    pub args: Vec<Value>,
}

impl Location {
    pub fn new(symbol: impl Into<String>, args: Vec<Value>) -> Location {
        Location {
            symbol: symbol.into(),
            args,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Update {
    pub location: Location,
    pub value: Value,
}

impl fmt::Display for Update {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {}", self.location, self.value)
    }
}

/// Updates ordered by location, then value; equal updates collapse.
pub type UpdateSet = BTreeSet<Update>;

/// Two updates of one location with distinct values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub location: Location,
    pub first: Value,
    pub second: Value,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} gets both {} and {}",
            self.location, self.first, self.second
        )
    }
}

#[allow(clippy::result_large_err)]
pub fn check_consistent(delta: &UpdateSet) -> Result<(), Conflict> {
    let mut prev: Option<&Update> = None;
    for u in delta {
        if let Some(p) = prev {
            if p.location == u.location {
                return Err(Conflict {
                    location: u.location.clone(),
                    first: p.value.clone(),
                    second: u.value.clone(),
                });
            }
        }
        prev = Some(u);
    }
    Ok(())
}

/// Source of values for external symbols during evaluation.
pub trait Externals {
    /// `chooser` is the host function the symbol is bound to.
    fn call(&mut self, symbol: &Symbol, chooser: Chooser, args: Vec<Value>) -> Result<Value, Error>;
}

/// For structures without external calls; every call is an error.
pub struct NoExternals;

impl Externals for NoExternals {
    fn call(&mut self, symbol: &Symbol, _: Chooser, _: Vec<Value>) -> Result<Value, Error> {
        Err(Error::NoOracle(symbol.name.clone()))
    }
}

#[derive(Clone)]
enum Interp {
    Builtin(BuiltinFn),
    Const(Value),
    Chooser(Chooser),
}

/// Interpretation of a static or external symbol. Equality compares the
/// binding only.
#[derive(Clone)]
pub struct StaticInterp {
    binding: Binding,
    interp: Interp,
}

impl StaticInterp {
    pub fn binding(&self) -> &Binding {
        &self.binding
    }

    pub fn chooser(&self) -> Option<Chooser> {
        match self.interp {
            Interp::Chooser(c) => Some(c),
            _ => None,
        }
    }
}

impl PartialEq for StaticInterp {
    fn eq(&self, other: &Self) -> bool {
        self.binding == other.binding
    }
}

impl fmt::Debug for StaticInterp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.binding.fmt(f)
    }
}

/// The interpretation of one dynamic symbol: a default value plus a finite
/// table of non-default entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub default: Value,
    entries: OrdMap<Vec<Value>, Value>,
}

impl Table {
    pub fn get(&self, args: &[Value]) -> &Value {
        self.entries.get(args).unwrap_or(&self.default)
    }

    /// Non-default entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Value>, &Value)> {
        self.entries.iter()
    }

    pub fn is_everywhere_default(&self) -> bool {
        self.entries.is_empty()
    }

    fn set(&mut self, args: Vec<Value>, value: Value) {
        if value == self.default {
            self.entries.remove(&args);
        } else {
            self.entries.insert(args, value);
        }
    }
}

/// A state.
///
/// Static and external symbols are interpreted through bindings; dynamic
/// symbols through normalized tables (no entry equals the default).
#[derive(Clone, Debug)]
pub struct Structure {
    vocab: Arc<Vocabulary>,
    statics: Arc<BTreeMap<String, StaticInterp>>,
    tables: OrdMap<String, Table>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.vocab == other.vocab && self.statics == other.statics && self.tables == other.tables
    }
}

impl Eq for Structure {}

fn resolve(sym: &Symbol, binding: Option<&Binding>) -> Result<StaticInterp, Error> {
    let binding = match binding {
        Some(b) => b.clone(),
        None if sym.is_external() => Binding::Chooser(Chooser::Choose.name().to_string()),
        None => Binding::Builtin(sym.name.clone()),
    };
    let interp = match &binding {
        Binding::Builtin(name) => {
            let b = builtins::lookup_static(name)
                .filter(|b| b.arity == sym.arity)
                .ok_or_else(|| Error::Unbound(sym.name.clone()))?;
            Interp::Builtin(b.func)
        }
        Binding::Const(v) if sym.arity == 0 => Interp::Const(v.clone()),
        Binding::Const(_) => return Err(Error::Unbound(sym.name.clone())),
        Binding::Chooser(name) => {
            Interp::Chooser(Chooser::lookup(name).ok_or_else(|| Error::Unbound(sym.name.clone()))?)
        }
    };
    Ok(StaticInterp { binding, interp })
}

impl Structure {
    /// Builds the structure in which every dynamic symbol is everywhere
    /// default. Statics without an explicit binding use the catalog entry of
    /// the same name.
    pub fn new(vocab: Vocabulary, bindings: &IndexMap<String, Binding>) -> Result<Structure, Error> {
        let mut statics = BTreeMap::new();
        for sym in vocab.iter().filter(|s| !s.is_dynamic()) {
            statics.insert(sym.name.clone(), resolve(sym, bindings.get(&sym.name))?);
        }
        let mut x = Structure {
            vocab: Arc::new(vocab),
            statics: Arc::new(statics),
            tables: OrdMap::new(),
        };
        let mut tables = OrdMap::new();
        for sym in x.vocab.dynamic_symbols() {
            let default = x.eval_default(sym)?;
            tables.insert(
                sym.name.clone(),
                Table {
                    default,
                    entries: OrdMap::new(),
                },
            );
        }
        x.tables = tables;
        Ok(x)
    }

    fn eval_default(&self, sym: &Symbol) -> Result<Value, Error> {
        let t = sym.default_term().expect("dynamic symbol");
        if !self.vocab.is_static_term(t) {
            return Err(Error::Invalid(format!(
                "default term of `{}` is not static",
                sym.name
            )));
        }
        self.eval(t, &mut NoExternals)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn table(&self, symbol: &str) -> Option<&Table> {
        self.tables.get(symbol)
    }

    pub fn tables(&self) -> impl Iterator<Item = (&str, &Table)> {
        self.tables.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn static_interp(&self, symbol: &str) -> Option<&StaticInterp> {
        self.statics.get(symbol)
    }

    /// Content of a dynamic location.
    pub fn get(&self, loc: &Location) -> Option<&Value> {
        self.tables.get(&loc.symbol).map(|t| t.get(&loc.args))
    }

    /// Content of a nullary dynamic symbol.
    pub fn var(&self, name: &str) -> Option<&Value> {
        self.tables.get(name).map(|t| t.get(&[]))
    }

    /// Evaluates a term: `f(t1, ..., tr)` denotes `f(eval t1, ..., eval tr)`.
    pub fn eval(&self, t: &Term, ext: &mut dyn Externals) -> Result<Value, Error> {
        match t {
            Term::Lit(v) => Ok(v.clone()),
            Term::App(head, args) => {
                let sym = self
                    .vocab
                    .get(head)
                    .ok_or_else(|| Error::UnknownSymbol(head.clone()))?;
                if sym.arity != args.len() {
                    return Err(Error::Arity {
                        symbol: head.clone(),
                        expected: sym.arity,
                        got: args.len(),
                    });
                }
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, ext))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(table) = self.tables.get(head) {
                    return Ok(table.get(&vals).clone());
                }
                let interp = self
                    .statics
                    .get(head)
                    .ok_or_else(|| Error::Unbound(head.clone()))?;
                let v = match &interp.interp {
                    Interp::Builtin(f) => f(&vals),
                    Interp::Const(v) => v.clone(),
                    Interp::Chooser(c) => {
                        let v = ext.call(sym, *c, vals)?;
                        if sym.relational {
                            Value::Bool(v.is_true())
                        } else {
                            v
                        }
                    }
                };
                Ok(v)
            }
        }
    }

    fn check_update(&self, u: &Update) -> Result<(), Error> {
        let sym = self
            .vocab
            .get(&u.location.symbol)
            .ok_or_else(|| Error::UnknownSymbol(u.location.symbol.clone()))?;
        if !sym.is_dynamic() {
            return Err(Error::NotDynamic(sym.name.clone()));
        }
        if sym.arity != u.location.args.len() {
            return Err(Error::Arity {
                symbol: sym.name.clone(),
                expected: sym.arity,
                got: u.location.args.len(),
            });
        }
        if sym.relational && !u.value.is_bool() {
            return Err(Error::NonBoolean(Box::new(u.location.clone()), u.value.clone()));
        }
        Ok(())
    }

    /// Executes a consistent update set.
    pub fn apply(&self, delta: &UpdateSet) -> Result<Structure, Error> {
        check_consistent(delta).map_err(|c| Error::Contradictory(Box::new(c)))?;
        let mut next = self.clone();
        for u in delta {
            self.check_update(u)?;
            next.tables
                .get_mut(&u.location.symbol)
                .expect("dynamic table")
                .set(u.location.args.clone(), u.value.clone());
        }
        Ok(next)
    }

    /// Sets one location in place; used for initial-state seeds.
    pub fn seed(&mut self, location: Location, value: Value) -> Result<(), Error> {
        let u = Update { location, value };
        self.check_update(&u)?;
        self.tables
            .get_mut(&u.location.symbol)
            .expect("dynamic table")
            .set(u.location.args, u.value);
        Ok(())
    }

    /// The restriction of this structure to `sub`.
    pub fn reduct(&self, sub: &Vocabulary) -> Result<Structure, Error> {
        if !sub.is_included_in(&self.vocab) {
            let missing: Vec<_> = sub
                .iter()
                .filter(|s| self.vocab.get(&s.name) != Some(*s))
                .map(|s| s.name.as_str())
                .collect();
            return Err(Error::NotIncluded(missing.join(", ")));
        }
        let statics = self
            .statics
            .iter()
            .filter(|(k, _)| sub.contains(k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let tables = self
            .tables
            .iter()
            .filter(|(k, _)| sub.contains(k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(Structure {
            vocab: Arc::new(sub.clone()),
            statics: Arc::new(statics),
            tables,
        })
    }

    /// The unique expansion to `sup` in which every new symbol is dynamic and
    /// everywhere default.
    pub fn uninformative_expansion(&self, sup: &Vocabulary) -> Result<Structure, Error> {
        if !self.vocab.is_included_in(sup) {
            return Err(Error::NotIncluded(format!(
                "structure vocabulary is not included in the target ({} symbols)",
                sup.len()
            )));
        }
        let mut tables = self.tables.clone();
        for sym in sup.iter().filter(|s| !self.vocab.contains(&s.name)) {
            if !sym.is_dynamic() {
                return Err(Error::NonDynamicExpansion(sym.name.clone()));
            }
            let default = self.eval_default(sym)?;
            tables.insert(
                sym.name.clone(),
                Table {
                    default,
                    entries: OrdMap::new(),
                },
            );
        }
        Ok(Structure {
            vocab: Arc::new(sup.clone()),
            statics: self.statics.clone(),
            tables,
        })
    }

    /// Human-readable differences against `other`, at most `limit` lines.
    pub fn diff(&self, other: &Structure, limit: usize) -> Vec<String> {
        let mut out = Vec::new();
        if self.vocab != other.vocab {
            out.push("vocabularies differ".to_string());
        }
        if self.statics != other.statics {
            out.push("static bindings differ".to_string());
        }
        for (name, t) in &self.tables {
            let Some(u) = other.tables.get(name) else {
                out.push(format!("`{name}` missing on the right"));
                continue;
            };
            if t.default != u.default {
                out.push(format!("default of `{name}`: {} vs {}", t.default, u.default));
            }
            let keys: BTreeSet<&Vec<Value>> = t.entries.keys().chain(u.entries.keys()).collect();
            for k in keys {
                let (a, b) = (t.get(k), u.get(k));
                if a != b {
                    out.push(format!("{}: {a} vs {b}", Location::new(name.clone(), k.clone())));
                }
            }
        }
        for name in other.tables.keys().filter(|k| !self.tables.contains_key(*k)) {
            out.push(format!("`{name}` missing on the left"));
        }
        out.truncate(limit);
        out
    }
}

pub fn eval_term(x: &Structure, t: &Term, ext: &mut dyn Externals) -> Result<Value, Error> {
    x.eval(t, ext)
}

pub fn apply_updates(x: &Structure, delta: &UpdateSet) -> Result<Structure, Error> {
    x.apply(delta)
}

pub fn reduct(y: &Structure, sub: &Vocabulary) -> Result<Structure, Error> {
    y.reduct(sub)
}

pub fn uninformative_expansion(x: &Structure, sup: &Vocabulary) -> Result<Structure, Error> {
    x.uninformative_expansion(sup)
}

pub fn structures_equal(x: &Structure, y: &Structure) -> bool {
    x == y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Structure {
        let mut v = Vocabulary::obligatory();
        v.insert(Symbol::new_static("+", 2, false));
        v.insert(Symbol::new_dynamic("x", 0, false, Term::nat(0)));
        v.insert(Symbol::new_dynamic("f", 1, false, Term::nil()));
        v.insert(Symbol::new_dynamic("p", 1, true, Term::fals()));
        Structure::new(v, &IndexMap::new()).unwrap()
    }

    fn upd(sym: &str, args: Vec<Value>, v: Value) -> Update {
        Update {
            location: Location::new(sym, args),
            value: v,
        }
    }

    #[test]
    fn eval_obligatory_terms() {
        let x = small();
        let two = Term::inc(Term::inc(Term::constant("0")));
        assert_eq!(
            x.eval(&Term::constant("0"), &mut NoExternals).unwrap(),
            Value::nat(0)
        );
        assert_eq!(x.eval(&two, &mut NoExternals).unwrap(), Value::nat(2));
        assert_eq!(
            x.eval(&Term::dec(Term::constant("0")), &mut NoExternals).unwrap(),
            Value::Nil
        );
    }

    #[test]
    fn eval_errors() {
        let x = small();
        assert_eq!(
            x.eval(&Term::constant("zz"), &mut NoExternals),
            Err(Error::UnknownSymbol("zz".into()))
        );
        assert!(matches!(
            x.eval(&Term::app("f", vec![]), &mut NoExternals),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn consistency() {
        let mut d = UpdateSet::new();
        assert!(check_consistent(&d).is_ok());
        d.insert(upd("x", vec![], Value::nat(1)));
        d.insert(upd("x", vec![], Value::nat(1)));
        assert_eq!(d.len(), 1);
        assert!(check_consistent(&d).is_ok());
        d.insert(upd("x", vec![], Value::nat(2)));
        let c = check_consistent(&d).unwrap_err();
        assert_eq!(c.location, Location::new("x", vec![]));
    }

    #[test]
    fn apply_normalizes_defaults() {
        let x = small();
        assert_eq!(x.apply(&UpdateSet::new()).unwrap(), x);
        let d: UpdateSet = [upd("f", vec![Value::nat(1)], Value::nat(5))].into();
        let y = x.apply(&d).unwrap();
        assert_ne!(x, y);
        assert_eq!(
            y.get(&Location::new("f", vec![Value::nat(1)])),
            Some(&Value::nat(5))
        );
        let back: UpdateSet = [upd("f", vec![Value::nat(1)], Value::Nil)].into();
        let z = y.apply(&back).unwrap();
        assert!(z.table("f").unwrap().is_everywhere_default());
        assert_eq!(z, x);
    }

    #[test]
    fn apply_rejects_bad_updates() {
        let x = small();
        let d: UpdateSet = [upd("x", vec![], Value::nat(1)), upd("x", vec![], Value::nat(2))].into();
        assert!(matches!(x.apply(&d), Err(Error::Contradictory(_))));
        let d: UpdateSet = [upd("+", vec![Value::nat(1), Value::nat(1)], Value::nat(3))].into();
        assert!(matches!(x.apply(&d), Err(Error::NotDynamic(_))));
        let d: UpdateSet = [upd("p", vec![Value::nat(1)], Value::nat(3))].into();
        assert!(matches!(x.apply(&d), Err(Error::NonBoolean(..))));
    }

    #[test]
    fn reduct_and_expansion_round_trip() {
        let x = small();
        let mut big = x.vocab().clone();
        big.insert(Symbol::new_dynamic("k", 0, false, Term::nat(0)));
        big.insert(Symbol::new_dynamic("Fire", 1, true, Term::fals()));
        let y = x.uninformative_expansion(&big).unwrap();
        assert_eq!(y.var("k"), Some(&Value::nat(0)));
        assert_eq!(
            y.get(&Location::new("Fire", vec![Value::nat(9)])),
            Some(&Value::FALSE)
        );
        assert_eq!(y.reduct(x.vocab()).unwrap(), x);
        assert_eq!(x.reduct(x.vocab()).unwrap(), x);
        assert_eq!(x.uninformative_expansion(x.vocab()).unwrap(), x);

        let mut bad = big.clone();
        bad.insert(Symbol::new_static("c", 0, false));
        assert!(matches!(
            x.uninformative_expansion(&bad),
            Err(Error::NonDynamicExpansion(_))
        ));
        assert!(matches!(x.reduct(&big), Err(Error::NotIncluded(_))));
    }

    #[test]
    fn diff_reports_entries() {
        let x = small();
        let d: UpdateSet = [upd("x", vec![], Value::nat(4))].into();
        let y = x.apply(&d).unwrap();
        assert_eq!(x.diff(&y, 10), vec!["x: 0 vs 4".to_string()]);
        assert!(x.diff(&x, 10).is_empty());
    }
}
