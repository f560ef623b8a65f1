//! Reversification: from a machine `A`, build the instrumented expansion `B`
//! and the inverse machine `C`.
//!
//! Every assignment occurrence `σn = f(t1..tr) := t0` of `A` becomes
//!
//! ```text
//! σn ∥ k := Inc(k) ∥ Fire_n(Inc(k)) := true
//!    ∥ rec0(Inc(k)) := f(t1..tr) ∥ rec1(Inc(k)) := t1 ∥ ... ∥ recr(Inc(k)) := tr
//! ```
//!
//! and `C` is `if k > 0 then (k := Dec(k) ∥ Undo_1 ∥ ... ∥ Undo_N)` with
//!
//! ```text
//! Undo_n = if Fire_n(k) = true then
//!            Fire_n(k) := false ∥ f(rec1(k)..recr(k)) := rec0(k)
//!            ∥ rec0(k) := nil ∥ ... ∥ recr(k) := nil
//! ```

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use serde_json::Value as Json;

use crate::error::Error;
use crate::syntax::Module;
use crate::term::{Rule, Term};
use crate::value::Value;
use crate::vocab::{Binding, Symbol};

/// One assignment occurrence of a program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    /// 1-based position in depth-first pre-order.
    pub n: usize,
    pub path: Vec<usize>,
    pub head: String,
    pub args: Vec<Term>,
    pub rhs: Term,
}

impl IndexEntry {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

/// Enumerates the assignment occurrences of `p` in depth-first pre-order.
pub fn index_assignments(p: &Rule) -> Vec<IndexEntry> {
    let mut out = Vec::new();
    p.for_each_assignment(&mut |path, r| {
        if let Rule::Assign { head, args, rhs } = r {
            out.push(IndexEntry {
                n: out.len() + 1,
                path: path.to_vec(),
                head: head.clone(),
                args: args.clone(),
                rhs: rhs.clone(),
            });
        }
    });
    out
}

/// The green light of `r` before simplification.
pub fn raw_green_light(r: &Rule) -> Term {
    match r {
        Rule::Assign { .. } => Term::tru(),
        Rule::Par(children) => children
            .iter()
            .map(raw_green_light)
            .reduce(Term::or)
            .unwrap_or_else(Term::fals),
        Rule::If { guard, then, els } => Term::or(
            Term::and(guard.clone(), raw_green_light(then)),
            Term::and(Term::not(guard.clone()), raw_green_light(els)),
        ),
    }
}

/// A term that holds in a state exactly when `r` generates an update there.
pub fn synth_green_light(r: &Rule) -> Term {
    simplify(&raw_green_light(r))
}

fn is_neg_of(a: &Term, b: &Term) -> bool {
    matches!(a, Term::App(h, x) if h == "not" && x.len() == 1 && &x[0] == b)
}

fn complementary(a: &Term, b: &Term) -> bool {
    is_neg_of(a, b) || is_neg_of(b, a)
}

/// Boolean simplification with a fixed rewrite set. The operands are
/// assumed boolean, which holds for terms built from guards.
pub fn simplify(t: &Term) -> Term {
    let Term::App(h, args) = t else { return t.clone() };
    let args: Vec<Term> = args.iter().map(simplify).collect();
    let tru = Term::tru();
    let fals = Term::fals();
    match (h.as_str(), args.as_slice()) {
        ("not", [x]) if x == &tru => fals,
        ("not", [x]) if x == &fals => tru,
        ("not", [Term::App(n, inner)]) if n == "not" && inner.len() == 1 => inner[0].clone(),
        ("and", [x, y]) => {
            if x == &fals || y == &fals || complementary(x, y) {
                fals
            } else if x == &tru || x == y {
                y.clone()
            } else if y == &tru {
                x.clone()
            } else {
                Term::and(x.clone(), y.clone())
            }
        }
        ("or", [x, y]) => {
            if x == &tru || y == &tru || complementary(x, y) {
                tru
            } else if x == &fals || x == y {
                y.clone()
            } else if y == &fals {
                x.clone()
            } else {
                // x ∨ (¬x ∧ z) = x ∨ z
                if let Term::App(a, p) = y {
                    if a == "and" && p.len() == 2 && is_neg_of(&p[0], x) {
                        return simplify(&Term::or(x.clone(), p[1].clone()));
                    }
                }
                if let Term::App(a, p) = x {
                    if a == "and" && p.len() == 2 && is_neg_of(&p[0], y) {
                        return simplify(&Term::or(y.clone(), p[1].clone()));
                    }
                }
                Term::or(x.clone(), y.clone())
            }
        }
        _ => Term::App(h.clone(), args),
    }
}

/// Ancillary symbols introduced for one assignment occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AncillaryEntry {
    pub n: usize,
    pub path: Vec<usize>,
    pub head: String,
    pub arity: usize,
    /// `None` when the occurrence is not instrumented.
    pub fire: Option<String>,
    /// `rec0..recr`; empty when the occurrence is not instrumented.
    pub recorders: Vec<String>,
    /// The occurrence is the step-counter increment of `A` itself.
    pub is_counter: bool,
    /// Simplified as an assignment that fires only at the last step.
    pub final_assignment: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Catalog {
    pub counter: String,
    /// The counter is a variable of `A` rather than a fresh symbol.
    pub counter_from_source: bool,
    pub entries: Vec<AncillaryEntry>,
    pub optimizations: Vec<String>,
    pub notes: Vec<String>,
}

impl Catalog {
    /// Every ancillary symbol name, counter first.
    pub fn ancillary_symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.counter_from_source {
            out.push(self.counter.clone());
        }
        for e in &self.entries {
            out.extend(e.fire.iter().cloned());
            out.extend(e.recorders.iter().cloned());
        }
        out
    }

    pub fn to_json(&self) -> Json {
        serde_json::to_value(self).expect("catalog serializes")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    /// Hoist a single counter increment under the green light.
    pub optimize_counter: bool,
    /// Occurrences (1-based) asserted to fire only at the last step, and
    /// never trivially.
    pub final_assignments: Vec<usize>,
}

/// `B`, `C` and the description of their ancillary symbols.
#[derive(Debug, Clone)]
pub struct Reversification {
    pub source: Module,
    pub options: Options,
    pub b: Module,
    pub c: Module,
    pub catalog: Catalog,
    pub green_light: Term,
}

pub fn reversify(a: &Module) -> Result<Reversification, Error> {
    reversify_with(a, &Options::default())
}

/// Names not yet used, derived from a base by appending primes.
struct Fresh(HashSet<String>);

impl Fresh {
    fn name(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        while self.0.contains(&name) {
            name.push('\'');
        }
        self.0.insert(name.clone());
        name
    }
}

fn is_zero_term(t: &Term) -> bool {
    matches!(t, Term::Lit(v) if *v == Value::nat(0)) || t.is_const("0")
}

fn standard(a: &Module, name: &str, arity: usize, relational: bool) -> bool {
    a.vocab
        .get(name)
        .is_some_and(|s| s.is_static() && s.arity == arity && s.relational == relational)
        && a.bindings
            .get(name)
            .is_none_or(|b| *b == Binding::Builtin(name.to_string()))
}

/// `v := v + 1` or `v := Inc(v)` for a nullary `v`.
fn increment_of(a: &Module, r: &Rule) -> Option<String> {
    let Rule::Assign { head, args, rhs } = r else {
        return None;
    };
    if !args.is_empty() {
        return None;
    }
    let var = Term::constant(head.clone());
    let ok = match rhs {
        Term::App(f, x) if f == "Inc" && x.len() == 1 => x[0] == var,
        Term::App(f, x) if f == "+" && x.len() == 2 => {
            standard(a, "+", 2, false)
                && ((x[0] == var && x[1] == Term::nat(1)) || (x[1] == var && x[0] == Term::nat(1)))
        }
        _ => false,
    };
    ok.then(|| head.clone())
}

/// Finds an existing step counter: the program is `if γ then par { v := v + 1; ... }`
/// where `v` is a nullary dynamic with default 0, never seeded to anything
/// else and written nowhere else. Returns the variable and the occurrence
/// number of its increment.
fn existing_counter(a: &Module, index: &[IndexEntry]) -> Option<(String, usize)> {
    let Rule::If { then, els, .. } = &a.program else {
        return None;
    };
    if !els.is_skip() {
        return None;
    }
    let Rule::Par(children) = &**then else { return None };
    for (i, child) in children.iter().enumerate() {
        let Some(v) = increment_of(a, child) else { continue };
        let sym = a.vocab.get(&v)?;
        if !sym.is_dynamic() || sym.relational || !sym.default_term().is_some_and(is_zero_term) {
            continue;
        }
        if a.init.iter().any(|s| s.symbol == v && s.value != Value::nat(0)) {
            continue;
        }
        if index.iter().filter(|e| e.head == v).count() != 1 {
            continue;
        }
        let path = vec![0, i];
        let n = index.iter().find(|e| e.path == path)?.n;
        return Some((v, n));
    }
    None
}

fn at_counter(f: &str, k: &Term) -> Term {
    Term::app(f, vec![k.clone()])
}

/// Builds `B`, `C` and the catalog.
pub fn reversify_with(a: &Module, opts: &Options) -> Result<Reversification, Error> {
    let index = index_assignments(&a.program);
    for &n in &opts.final_assignments {
        let Some(e) = index.iter().find(|e| e.n == n) else {
            return Err(Error::Invalid(format!("no assignment occurrence {n}")));
        };
        if e.arity() > 0 {
            return Err(Error::Invalid(format!(
                "occurrence {n} assigns `{}` with {} argument(s); only variables can be simplified",
                e.head,
                e.arity()
            )));
        }
    }
    let gamma = synth_green_light(&a.program);
    let mut fresh = Fresh(a.vocab.names().map(str::to_string).collect());
    let mut optimizations = Vec::new();
    let mut notes = Vec::new();

    let source_counter = if opts.optimize_counter {
        existing_counter(a, &index)
    } else {
        None
    };
    if let Some((_, n)) = &source_counter {
        if opts.final_assignments.contains(n) {
            return Err(Error::Invalid(format!(
                "occurrence {n} is the step counter and cannot be simplified"
            )));
        }
    }
    let counter = match &source_counter {
        Some((v, _)) => v.clone(),
        None => fresh.name("__k"),
    };
    let k = Term::constant(counter.clone());
    let k1 = Term::inc(k.clone());

    let mut occurrences: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &index {
        *occurrences.entry(e.head.as_str()).or_default() += 1;
    }

    let mut vocab_b = a.vocab.clone();
    if source_counter.is_none() {
        vocab_b.insert(Symbol::new_dynamic(counter.clone(), 0, false, Term::nat(0)));
    }
    let mut entries = Vec::new();
    for e in &index {
        let is_counter = source_counter.as_ref().is_some_and(|(_, n)| *n == e.n);
        let final_assignment = opts.final_assignments.contains(&e.n);
        let (fire, recorders) = if is_counter || final_assignment {
            (None, Vec::new())
        } else {
            let fire = fresh.name(&format!("__Fire_{}", e.n));
            vocab_b.insert(Symbol::new_dynamic(fire.clone(), 1, true, Term::fals()));
            let recorders: Vec<String> = (0..=e.arity())
                .map(|i| {
                    let base = if occurrences[e.head.as_str()] == 1 {
                        format!("__{}_{i}", e.head)
                    } else {
                        format!("__rec_{}_{i}", e.n)
                    };
                    let name = fresh.name(&base);
                    vocab_b.insert(Symbol::new_dynamic(name.clone(), 1, false, Term::nil()));
                    name
                })
                .collect();
            (Some(fire), recorders)
        };
        entries.push(AncillaryEntry {
            n: e.n,
            path: e.path.clone(),
            head: e.head.clone(),
            arity: e.arity(),
            fire,
            recorders,
            is_counter,
            final_assignment,
        });
    }

    // B's program: every occurrence replaced in place by its instrumentation
    let hoist = opts.optimize_counter;
    let inc = Rule::assign(counter.clone(), vec![], k1.clone());
    let mut n = 0;
    let instrumented = instrument(&a.program, &mut |sigma| {
        let entry = &entries[n];
        n += 1;
        if entry.is_counter {
            return sigma.clone();
        }
        let mut parts = vec![sigma.clone()];
        if !hoist {
            parts.push(inc.clone());
        }
        if let Some(fire) = &entry.fire {
            let Rule::Assign { head, args, .. } = sigma else {
                unreachable!()
            };
            parts.push(Rule::assign(fire.clone(), vec![k1.clone()], Term::tru()));
            parts.push(Rule::assign(
                entry.recorders[0].clone(),
                vec![k1.clone()],
                Term::app(head.clone(), args.clone()),
            ));
            for (i, t) in args.iter().enumerate() {
                parts.push(Rule::assign(
                    entry.recorders[i + 1].clone(),
                    vec![k1.clone()],
                    t.clone(),
                ));
            }
        }
        if parts.len() == 1 {
            sigma.clone()
        } else {
            Rule::Par(parts)
        }
    });
    let program_b = if let Some((v, _)) = &source_counter {
        optimizations.push(format!(
            "existing step counter `{v}` reused; its increment is not instrumented"
        ));
        instrumented
    } else if hoist {
        let (p, note) = hoist_counter(&instrumented, &counter, &gamma);
        optimizations.push(note);
        p
    } else {
        instrumented
    };
    if !opts.final_assignments.is_empty() {
        optimizations.push(format!(
            "final-assignment simplification of occurrence(s) {:?}",
            opts.final_assignments
        ));
    }

    // C's program
    let guard_c = if standard(a, ">", 2, true) {
        Term::app(">", vec![k.clone(), Term::nat(0)])
    } else {
        notes.push("`>` is not a standard symbol of A; the inverse tests the counter with `!= 0`".into());
        Term::not(Term::eq(k.clone(), Term::nat(0)))
    };
    let mut body = vec![Rule::assign(counter.clone(), vec![], Term::dec(k.clone()))];
    for entry in &entries {
        if entry.is_counter {
            continue;
        }
        if entry.final_assignment {
            let sym = vocab_b.get(&entry.head).expect("assigned symbol");
            let d = sym.default_term().expect("dynamic").clone();
            let v = Term::constant(entry.head.clone());
            body.push(Rule::cond(
                Term::not(Term::eq(v, d.clone())),
                Rule::assign(entry.head.clone(), vec![], d),
                Rule::skip(),
            ));
            continue;
        }
        let fire = entry.fire.as_ref().expect("instrumented");
        let sym = vocab_b.get(&entry.head).expect("assigned symbol");
        let rec = |i: usize| at_counter(&entry.recorders[i], &k);
        let restored = if sym.relational {
            Term::eq(rec(0), Term::tru())
        } else {
            rec(0)
        };
        let mut undo = vec![
            Rule::assign(fire.clone(), vec![k.clone()], Term::fals()),
            Rule::assign(entry.head.clone(), (1..=entry.arity).map(rec).collect(), restored),
        ];
        for r in &entry.recorders {
            undo.push(Rule::assign(r.clone(), vec![k.clone()], Term::nil()));
        }
        body.push(Rule::cond(
            Term::eq(at_counter(fire, &k), Term::tru()),
            Rule::Par(undo),
            Rule::skip(),
        ));
    }
    let program_c = Rule::cond(guard_c, Rule::Par(body), Rule::skip());

    let mut b = Module::new(format!("{}_B", a.name), vocab_b.clone(), program_b);
    b.bindings = a.bindings.clone();
    b.init = a.init.clone();
    b.io = a.io.clone();
    let mut c = Module::new(format!("{}_C", a.name), vocab_b, program_c);
    c.bindings = a.bindings.clone();

    Ok(Reversification {
        source: a.clone(),
        options: opts.clone(),
        b,
        c,
        catalog: Catalog {
            counter,
            counter_from_source: source_counter.is_some(),
            entries,
            optimizations,
            notes,
        },
        green_light: gamma,
    })
}

fn instrument(r: &Rule, f: &mut impl FnMut(&Rule) -> Rule) -> Rule {
    match r {
        Rule::Assign { .. } => f(r),
        Rule::If { guard, then, els } => Rule::cond(guard.clone(), instrument(then, f), instrument(els, f)),
        Rule::Par(children) => Rule::Par(children.iter().map(|c| instrument(c, f)).collect()),
    }
}

fn is_increment_of(r: &Rule, counter: &str) -> bool {
    matches!(r, Rule::Assign { head, args, rhs }
        if head == counter && args.is_empty()
            && *rhs == Term::inc(Term::constant(counter)))
}

/// Removes every `counter := Inc(counter)` from `r`; a parallel block left
/// with one rule collapses to it.
fn strip_increments(r: &Rule, counter: &str) -> Rule {
    match r {
        Rule::Assign { .. } if is_increment_of(r, counter) => Rule::skip(),
        Rule::Assign { .. } => r.clone(),
        Rule::If { guard, then, els } => Rule::cond(
            guard.clone(),
            strip_increments(then, counter),
            strip_increments(els, counter),
        ),
        Rule::Par(children) => {
            let kept: Vec<Rule> = children
                .iter()
                .filter(|c| !is_increment_of(c, counter))
                .map(|c| strip_increments(c, counter))
                .collect();
            if kept.len() == 1 && children.len() > 1 {
                kept.into_iter().next().unwrap()
            } else {
                Rule::Par(kept)
            }
        }
    }
}

fn hoist_counter(program: &Rule, counter: &str, gamma: &Term) -> (Rule, String) {
    if *gamma == Term::fals() {
        return (
            strip_increments(program, counter),
            "counter optimization not applicable: the program never fires".into(),
        );
    }
    let inc = Rule::assign(counter, vec![], Term::inc(Term::constant(counter)));
    let stripped = strip_increments(program, counter);
    let with_inc = |body: Rule| match body {
        Rule::Par(mut v) => {
            v.insert(0, inc.clone());
            Rule::Par(v)
        }
        other => Rule::Par(vec![inc.clone(), other]),
    };
    match &stripped {
        Rule::If { guard, then, els } if guard == gamma && els.is_skip() => (
            Rule::cond(guard.clone(), with_inc((**then).clone()), Rule::skip()),
            "counter increment hoisted under the program's own guard".into(),
        ),
        _ => (
            Rule::cond(gamma.clone(), with_inc(stripped), Rule::skip()),
            "program wrapped in its green light with one counter increment".into(),
        ),
    }
}

/// Hoists the counter increments of an instrumented program `b_program`
/// under the green light `gamma`, leaving exactly one increment.
pub fn optimize_step_counter(b_program: &Rule, counter: &str, gamma: &Term) -> Rule {
    hoist_counter(b_program, counter, gamma).0
}

/// Re-derives `B` and `C` with occurrence `n` simplified as an assignment
/// that fires only at the last step. The property is asserted by the
/// caller, not checked.
pub fn simplify_final_assignment(
    arts: &Reversification,
    n: usize,
    asserted: bool,
) -> Result<Reversification, Error> {
    if !asserted {
        return Err(Error::Invalid(format!(
            "occurrence {n} may only be simplified when it is asserted to fire only at the last step"
        )));
    }
    let mut opts = arts.options.clone();
    if !opts.final_assignments.contains(&n) {
        opts.final_assignments.push(n);
    }
    reversify_with(&arts.source, &opts)
}

/// Counts the assignments of `counter := Inc(counter)` or `counter := counter + 1`
/// in `r`.
pub fn counter_increments(r: &Rule, counter: &str) -> usize {
    let var = Term::constant(counter);
    let mut n = 0;
    r.for_each_assignment(&mut |_, a| {
        if let Rule::Assign { head, args, rhs } = a {
            let plus_one = Term::app("+", vec![var.clone(), Term::nat(1)]);
            if head == counter && args.is_empty() && (*rhs == Term::inc(var.clone()) || *rhs == plus_one) {
                n += 1;
            }
        }
    });
    n
}
