//! Abstract syntax of terms and rules.

use crate::value::Value;

/// A ground term: a symbol applied to argument terms, or an embedded literal.
///
/// Literals are static by construction. Booleans and `nil` are never stored
/// as literals; [`Term::lit`] turns them into the obligatory constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    App(String, Vec<Term>),
    Lit(Value),
}

impl Term {
    pub fn app(head: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(head.into(), args)
    }

    pub fn constant(head: impl Into<String>) -> Term {
        Term::App(head.into(), Vec::new())
    }

    pub fn lit(v: Value) -> Term {
        match v {
            Value::Bool(true) => Term::constant("true"),
            Value::Bool(false) => Term::constant("false"),
            Value::Nil => Term::constant("nil"),
            other => Term::Lit(other),
        }
    }

    pub fn nat(n: u64) -> Term {
        Term::Lit(Value::nat(n))
    }

    pub fn tru() -> Term {
        Term::constant("true")
    }

    pub fn fals() -> Term {
        Term::constant("false")
    }

    pub fn nil() -> Term {
        Term::constant("nil")
    }

    pub fn eq(a: Term, b: Term) -> Term {
        Term::app("=", vec![a, b])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Term) -> Term {
        Term::app("not", vec![a])
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::app("and", vec![a, b])
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::app("or", vec![a, b])
    }

    pub fn inc(a: Term) -> Term {
        Term::app("Inc", vec![a])
    }

    pub fn dec(a: Term) -> Term {
        Term::app("Dec", vec![a])
    }

    pub fn head(&self) -> Option<&str> {
        match self {
            Term::App(h, _) => Some(h),
            Term::Lit(_) => None,
        }
    }

    pub fn is_const(&self, name: &str) -> bool {
        matches!(self, Term::App(h, a) if h == name && a.is_empty())
    }

    /// Every symbol occurring in the term, outermost first.
    pub fn symbols(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let Term::App(h, args) = self {
            out.push(h);
            for a in args {
                a.collect_symbols(out);
            }
        }
    }
}

/// A rule. `Par(vec![])` is `skip`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Assign {
        head: String,
        args: Vec<Term>,
        rhs: Term,
    },
    If {
        guard: Term,
        then: Box<Rule>,
        els: Box<Rule>,
    },
    Par(Vec<Rule>),
}

impl Rule {
    pub fn skip() -> Rule {
        Rule::Par(Vec::new())
    }

    pub fn is_skip(&self) -> bool {
        matches!(self, Rule::Par(v) if v.is_empty())
    }

    pub fn assign(head: impl Into<String>, args: Vec<Term>, rhs: Term) -> Rule {
        Rule::Assign {
            head: head.into(),
            args,
            rhs,
        }
    }

    pub fn cond(guard: Term, then: Rule, els: Rule) -> Rule {
        Rule::If {
            guard,
            then: Box::new(then),
            els: Box::new(els),
        }
    }

    /// Visits every assignment occurrence in depth-first pre-order with its
    /// path from the root (`0`/`1` select then/else, `i` selects a parallel
    /// child).
    pub fn for_each_assignment<'a>(&'a self, f: &mut impl FnMut(&[usize], &'a Rule)) {
        fn go<'a>(r: &'a Rule, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &'a Rule)) {
            match r {
                Rule::Assign { .. } => f(path, r),
                Rule::If { then, els, .. } => {
                    path.push(0);
                    go(then, path, f);
                    path.pop();
                    path.push(1);
                    go(els, path, f);
                    path.pop();
                }
                Rule::Par(children) => {
                    for (i, c) in children.iter().enumerate() {
                        path.push(i);
                        go(c, path, f);
                        path.pop();
                    }
                }
            }
        }
        go(self, &mut Vec::new(), f)
    }

    pub fn assignment_count(&self) -> usize {
        let mut n = 0;
        self.for_each_assignment(&mut |_, _| n += 1);
        n
    }

    /// Every term in the rule (guards, assignment arguments and right-hand sides).
    pub fn for_each_term<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Rule::Assign { args, rhs, .. } => {
                args.iter().for_each(&mut *f);
                f(rhs);
            }
            Rule::If { guard, then, els } => {
                f(guard);
                then.for_each_term(f);
                els.for_each_term(f);
            }
            Rule::Par(children) => children.iter().for_each(|c| c.for_each_term(f)),
        }
    }
}
