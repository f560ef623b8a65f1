use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Module, Seed};
use crate::term::{Rule, Term};
use crate::value::Value;
use crate::vocab::{Binding, Symbol, Vocabulary};

/// Size limits for generated modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeBounds {
    /// Depth of the rule tree; depth 1 is a single assignment.
    pub max_depth: usize,
    /// Number of non-obligatory dynamic symbols.
    pub max_symbols: usize,
    pub max_arity: usize,
    /// Add an external chooser and use it in terms.
    pub externals: bool,
}

impl Default for SizeBounds {
    fn default() -> Self {
        SizeBounds {
            max_depth: 4,
            max_symbols: 5,
            max_arity: 2,
            externals: false,
        }
    }
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    bounds: &'a SizeBounds,
    dynamics: Vec<Symbol>,
}

const ATOMS: &[&str] = &["a", "b"];

impl Gen<'_> {
    fn small_value(&mut self) -> Value {
        match self.rng.gen_range(0..6) {
            0 => Value::atom(ATOMS.choose(&mut self.rng).unwrap()),
            1 => Value::Nil,
            _ => Value::nat(self.rng.gen_range(0..4)),
        }
    }

    fn literal(&mut self) -> Term {
        Term::lit(self.small_value())
    }

    fn pick_dynamic(&mut self, relational: Option<bool>) -> Option<Symbol> {
        let pool: Vec<&Symbol> = self
            .dynamics
            .iter()
            .filter(|s| relational.is_none_or(|r| s.relational == r))
            .collect();
        pool.choose(&mut self.rng).map(|s| (*s).clone())
    }

    fn read(&mut self, sym: &Symbol, depth: usize) -> Term {
        let args = (0..sym.arity).map(|_| self.term(depth + 1)).collect();
        Term::app(sym.name.clone(), args)
    }

    /// A term of any kind; `depth` limits nesting.
    fn term(&mut self, depth: usize) -> Term {
        if depth >= 2 {
            return self.literal();
        }
        match self.rng.gen_range(0..10) {
            0..=2 => self.literal(),
            3..=5 => match self.pick_dynamic(None) {
                Some(s) => self.read(&s, depth),
                None => self.literal(),
            },
            6 => Term::app("+", vec![self.term(depth + 1), Term::nat(1)]),
            7 => Term::app("-", vec![self.term(depth + 1), Term::nat(1)]),
            8 if self.bounds.externals => Term::app("pick", vec![self.literal_set()]),
            _ => self.bool_term(depth + 1),
        }
    }

    fn literal_set(&mut self) -> Term {
        let n = self.rng.gen_range(1..4);
        Term::Lit(Value::set((0..n).map(|_| Value::nat(self.rng.gen_range(0..4)))))
    }

    /// A term with a relational head.
    fn bool_term(&mut self, depth: usize) -> Term {
        if depth >= 3 {
            return if self.rng.gen() { Term::tru() } else { Term::fals() };
        }
        match self.rng.gen_range(0..9) {
            0..=2 => Term::eq(self.term(depth + 1), self.term(depth + 1)),
            3 => Term::app("<", vec![self.term(depth + 1), self.term(depth + 1)]),
            4 => match self.pick_dynamic(Some(true)) {
                Some(s) => self.read(&s, depth),
                None => Term::tru(),
            },
            5 => Term::not(self.bool_term(depth + 1)),
            6 => Term::and(self.bool_term(depth + 1), self.bool_term(depth + 1)),
            7 => Term::or(self.bool_term(depth + 1), self.bool_term(depth + 1)),
            _ if self.bounds.externals => Term::constant("flip"),
            _ => Term::app("Num", vec![self.term(depth + 1)]),
        }
    }

    fn assignment(&mut self) -> Rule {
        let sym = self.pick_dynamic(None).expect("at least one dynamic symbol");
        let args = (0..sym.arity).map(|_| self.term(1)).collect();
        let rhs = if sym.relational {
            self.bool_term(0)
        } else {
            self.term(0)
        };
        Rule::assign(sym.name.clone(), args, rhs)
    }

    fn rule(&mut self, depth: usize) -> Rule {
        if depth <= 1 {
            return self.assignment();
        }
        match self.rng.gen_range(0..6) {
            0 => self.assignment(),
            1..=3 => {
                let then = self.rule(depth - 1);
                let els = if self.rng.gen_bool(0.4) {
                    Rule::skip()
                } else {
                    self.rule(depth - 1)
                };
                Rule::cond(self.bool_term(0), then, els)
            }
            _ => {
                let n = self.rng.gen_range(0..4);
                Rule::Par((0..n).map(|_| self.rule(depth - 1)).collect())
            }
        }
    }
}

/// A random valid module, determined by `seed`. About half of the modules
/// are wrapped as `if t < N then par { t := t + 1; body }` so that they
/// terminate.
pub fn random_module(seed: u64, bounds: SizeBounds) -> Module {
    assert!(
        bounds.max_depth > 0 && bounds.max_symbols > 0,
        "size bounds must be positive"
    );
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        bounds: &bounds,
        dynamics: Vec::new(),
    };
    let mut vocab = Vocabulary::obligatory();
    vocab.insert(Symbol::new_static("+", 2, false));
    vocab.insert(Symbol::new_static("-", 2, false));
    vocab.insert(Symbol::new_static("<", 2, true));
    let mut bindings = indexmap::IndexMap::new();
    if bounds.externals {
        vocab.insert(Symbol::new_external("pick", 1, false));
        vocab.insert(Symbol::new_external("flip", 0, true));
        bindings.insert("pick".to_string(), Binding::Chooser("choose".into()));
        bindings.insert("flip".to_string(), Binding::Chooser("coin".into()));
    }
    let count = g.rng.gen_range(1..=bounds.max_symbols);
    for i in 0..count {
        let arity = g.rng.gen_range(0..=bounds.max_arity);
        let relational = g.rng.gen_bool(0.3);
        let default = if relational {
            if g.rng.gen() {
                Term::fals()
            } else {
                Term::tru()
            }
        } else {
            match g.rng.gen_range(0..3) {
                0 => Term::nil(),
                1 => Term::nat(0),
                _ => g.literal(),
            }
        };
        let sym = Symbol::new_dynamic(format!("d{i}"), arity, relational, default);
        vocab.insert(sym.clone());
        g.dynamics.push(sym);
    }

    let mut init = Vec::new();
    for _ in 0..g.rng.gen_range(0..4) {
        let sym = g.dynamics.choose(&mut g.rng).unwrap().clone();
        let args: Vec<Value> = (0..sym.arity)
            .map(|_| Value::nat(g.rng.gen_range(0..4)))
            .collect();
        let value = if sym.relational {
            Value::Bool(g.rng.gen())
        } else {
            g.small_value()
        };
        if !init.iter().any(|s: &Seed| s.symbol == sym.name && s.args == args) {
            init.push(Seed::new(sym.name.clone(), args, value));
        }
    }

    let body = g.rule(bounds.max_depth);
    let program = if bounds.max_depth > 1 && g.rng.gen() {
        let limit = g.rng.gen_range(1..20);
        vocab.insert(Symbol::new_dynamic("t", 0, false, Term::nat(0)));
        let t = Term::constant("t");
        Rule::cond(
            Term::app("<", vec![t.clone(), Term::nat(limit)]),
            Rule::Par(vec![
                Rule::assign("t", vec![], Term::app("+", vec![t, Term::nat(1)])),
                body,
            ]),
            Rule::skip(),
        )
    } else {
        body
    };

    let mut m = Module::new(format!("gen{seed}"), vocab, program);
    m.bindings = bindings;
    m.init = init;
    m
}
