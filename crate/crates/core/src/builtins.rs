//! Host catalog of static interpretations and external choosers.
//!
//! Static symbols are bound to entries of this catalog by name. Every entry is
//! total: arguments outside an entry's intended domain yield `nil` (or `false`
//! for relational entries).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::value::Value;

pub type BuiltinFn = fn(&[Value]) -> Value;

#[derive(Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub arity: usize,
    pub relational: bool,
    pub func: BuiltinFn,
}

macro_rules! builtin {
    ($name:expr, $arity:expr, $rel:expr, $f:expr) => {
        Builtin {
            name: $name,
            arity: $arity,
            relational: $rel,
            func: $f,
        }
    };
}

static CATALOG: &[Builtin] = &[
    // obligatory
    builtin!("true", 0, true, |_| Value::TRUE),
    builtin!("false", 0, true, |_| Value::FALSE),
    builtin!("nil", 0, false, |_| Value::Nil),
    builtin!("0", 0, false, |_| Value::nat(0)),
    builtin!("Bool", 1, true, |a| Value::Bool(a[0].is_bool())),
    builtin!("not", 1, true, |a| match a[0] {
        Value::Bool(b) => Value::Bool(!b),
        _ => Value::FALSE,
    }),
    builtin!("and", 2, true, |a| match (&a[0], &a[1]) {
        (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && *y),
        _ => Value::FALSE,
    }),
    builtin!("or", 2, true, |a| match (&a[0], &a[1]) {
        (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x || *y),
        _ => Value::FALSE,
    }),
    builtin!("Num", 1, true, |a| Value::Bool(a[0].is_natural())),
    builtin!("Inc", 1, false, |a| match &a[0] {
        Value::Num(q) => Value::Num(q + BigRational::one()),
        _ => Value::Nil,
    }),
    builtin!("Dec", 1, false, dec),
    builtin!("=", 2, true, |a| Value::Bool(a[0] == a[1])),
    // arithmetic and order
    builtin!("+", 2, false, |a| num2(a, |x, y| Some(x + y))),
    builtin!("-", 2, false, minus),
    builtin!("*", 2, false, |a| num2(a, |x, y| Some(x * y))),
    builtin!("/", 2, false, |a| num2(a, |x, y| {
        (!y.is_zero()).then(|| x / y)
    })),
    builtin!("<", 2, true, |a| cmp2(a, |x, y| x < y)),
    builtin!(">", 2, true, |a| cmp2(a, |x, y| x > y)),
    builtin!("<=", 2, true, |a| cmp2(a, |x, y| x <= y)),
    builtin!(">=", 2, true, |a| cmp2(a, |x, y| x >= y)),
    builtin!("abs", 1, false, |a| match &a[0] {
        Value::Num(q) => Value::Num(q.abs()),
        Value::Set(s) => Value::nat(s.len() as u64),
        Value::Tuple(t) => Value::nat(t.len() as u64),
        _ => Value::Nil,
    }),
    builtin!("Real", 1, true, |a| Value::Bool(matches!(a[0], Value::Num(_)))),
    // sets and tuples
    builtin!("in", 2, true, |a| match &a[1] {
        Value::Set(s) => Value::Bool(s.contains(&a[0])),
        Value::Tuple(t) => Value::Bool(t.contains(&a[0])),
        _ => Value::FALSE,
    }),
    builtin!("union", 2, false, |a| match (&a[0], &a[1]) {
        (Value::Set(x), Value::Set(y)) => Value::Set(x.union(y).cloned().collect()),
        _ => Value::Nil,
    }),
    builtin!("Merge", 2, false, merge),
    builtin!("Intra", 2, false, intra),
    builtin!("nth", 2, false, |a| match (&a[0], a[1].as_usize()) {
        (Value::Tuple(t), Some(i)) => t.get(i).cloned().unwrap_or(Value::Nil),
        _ => Value::Nil,
    }),
    builtin!("append", 2, false, |a| match &a[0] {
        Value::Tuple(t) => {
            let mut t = t.clone();
            t.push(a[1].clone());
            Value::Tuple(t)
        }
        _ => Value::Nil,
    }),
    // sample interpretations for demonstration modules
    builtin!("minus_one_third", 1, false, |a| match &a[0] {
        Value::Num(q) => Value::Num(q - BigRational::new(BigInt::one(), BigInt::from(3))),
        _ => Value::Nil,
    }),
    builtin!("square_minus_two", 1, false, |a| match &a[0] {
        Value::Num(q) => Value::Num(q * q - BigRational::from_integer(BigInt::from(2))),
        _ => Value::Nil,
    }),
];

/// Names of the symbols every vocabulary contains.
pub const OBLIGATORY: &[&str] = &[
    "true", "false", "nil", "0", "Bool", "not", "and", "or", "Num", "Inc", "Dec", "=",
];

pub fn lookup_static(name: &str) -> Option<&'static Builtin> {
    CATALOG.iter().find(|b| b.name == name)
}

pub fn static_catalog() -> &'static [Builtin] {
    CATALOG
}

fn dec(a: &[Value]) -> Value {
    match &a[0] {
        Value::Num(q) if q.is_integer() && q >= &BigRational::one() => Value::Num(q - BigRational::one()),
        _ => Value::Nil,
    }
}

fn num2(a: &[Value], f: impl Fn(&BigRational, &BigRational) -> Option<BigRational>) -> Value {
    match (&a[0], &a[1]) {
        (Value::Num(x), Value::Num(y)) => f(x, y).map(Value::Num).unwrap_or(Value::Nil),
        _ => Value::Nil,
    }
}

fn cmp2(a: &[Value], f: impl Fn(&BigRational, &BigRational) -> bool) -> Value {
    match (&a[0], &a[1]) {
        (Value::Num(x), Value::Num(y)) => Value::Bool(f(x, y)),
        _ => Value::FALSE,
    }
}

/// Numeric subtraction, or set difference.
fn minus(a: &[Value]) -> Value {
    match (&a[0], &a[1]) {
        (Value::Num(x), Value::Num(y)) => Value::Num(x - y),
        (Value::Set(x), Value::Set(y)) => Value::Set(x.difference(y).cloned().collect()),
        _ => Value::Nil,
    }
}

/// The ends of an edge `{x, y}` (or `{x}` for a loop) among the cells of `partition`.
fn ends<'a>(edge: &Value, partition: &'a BTreeSet<Value>) -> Option<(&'a Value, &'a Value)> {
    let edge = edge.as_set()?;
    let mut it = edge.iter();
    let x = it.next()?;
    let y = it.next().unwrap_or(x);
    if it.next().is_some() {
        return None;
    }
    let cell_of = |v: &Value| {
        partition
            .iter()
            .find(|c| c.as_set().is_some_and(|c| c.contains(v)))
    };
    Some((cell_of(x)?, cell_of(y)?))
}

/// `Merge(e, S) = (S - {p, q}) ∪ {p ∪ q}` where `p`, `q` are the `S`-ends of `e`.
fn merge(a: &[Value]) -> Value {
    let Some(partition) = a[1].as_set() else {
        return Value::Nil;
    };
    let Some((p, q)) = ends(&a[0], partition) else {
        return Value::Nil;
    };
    let joined: BTreeSet<Value> = p
        .as_set()
        .into_iter()
        .chain(q.as_set())
        .flatten()
        .cloned()
        .collect();
    let mut out: BTreeSet<Value> = partition.iter().filter(|c| *c != p && *c != q).cloned().collect();
    out.insert(Value::Set(joined));
    Value::Set(out)
}

/// `Intra(e, S) = {{x, y} : x ∈ p, y ∈ q}` where `p`, `q` are the `S`-ends of `e`.
fn intra(a: &[Value]) -> Value {
    let Some(partition) = a[1].as_set() else {
        return Value::Nil;
    };
    let Some((p, q)) = ends(&a[0], partition) else {
        return Value::Nil;
    };
    let (Some(p), Some(q)) = (p.as_set(), q.as_set()) else {
        return Value::Nil;
    };
    let mut out = BTreeSet::new();
    for x in p {
        for y in q {
            out.insert(Value::set([x.clone(), y.clone()]));
        }
    }
    Value::Set(out)
}

/// External choosers that external symbols may be bound to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chooser {
    /// Returns a member of its set (or tuple) argument; `nil` when empty.
    Choose,
    /// Returns a boolean.
    Coin,
}

impl Chooser {
    pub fn lookup(name: &str) -> Option<Chooser> {
        match name {
            "choose" => Some(Chooser::Choose),
            "coin" => Some(Chooser::Coin),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chooser::Choose => "choose",
            Chooser::Coin => "coin",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(name: &str, args: &[Value]) -> Value {
        (lookup_static(name).unwrap().func)(args)
    }

    fn cell(xs: &[&str]) -> Value {
        Value::set(xs.iter().map(|x| Value::atom(x)))
    }

    #[test]
    fn dec_of_zero_is_nil() {
        assert_eq!(call("Dec", &[Value::nat(0)]), Value::Nil);
        assert_eq!(call("Dec", &[Value::nat(5)]), Value::nat(4));
        assert_eq!(call("Inc", &[Value::nat(5)]), Value::nat(6));
        assert_eq!(call("Inc", &[Value::Nil]), Value::Nil);
    }

    #[test]
    fn connectives_off_booleans_are_false() {
        assert_eq!(call("and", &[Value::nat(3), Value::Nil]), Value::FALSE);
        assert_eq!(call("or", &[Value::TRUE, Value::Nil]), Value::FALSE);
        assert_eq!(call("not", &[Value::Nil]), Value::FALSE);
        assert_eq!(call("Bool", &[Value::FALSE]), Value::TRUE);
        assert_eq!(call("Bool", &[Value::Nil]), Value::FALSE);
    }

    #[test]
    fn relational_entries_return_booleans() {
        let samples = [
            Value::Nil,
            Value::nat(2),
            Value::ratio(-1, 2),
            Value::atom("a"),
            Value::set([Value::nat(1)]),
            Value::TRUE,
        ];
        for b in static_catalog().iter().filter(|b| b.relational) {
            let mut args = vec![Value::Nil; b.arity];
            for x in &samples {
                for y in &samples {
                    if b.arity > 0 {
                        args[0] = x.clone();
                    }
                    if b.arity > 1 {
                        args[1] = y.clone();
                    }
                    assert!((b.func)(&args).is_bool(), "{} not boolean", b.name);
                }
            }
        }
    }

    #[test]
    fn division_by_zero_is_nil() {
        assert_eq!(call("/", &[Value::nat(1), Value::nat(0)]), Value::Nil);
        assert_eq!(call("/", &[Value::nat(1), Value::nat(4)]), Value::ratio(1, 4));
    }

    #[test]
    fn merge_and_intra_on_a_square() {
        let p = Value::set([cell(&["a"]), cell(&["b"]), cell(&["c"]), cell(&["d"])]);
        let e = cell(&["a", "b"]);
        let merged = call("Merge", &[e.clone(), p.clone()]);
        assert_eq!(
            merged,
            Value::set([cell(&["a", "b"]), cell(&["c"]), cell(&["d"])])
        );
        assert_eq!(call("Intra", &[e, p]), Value::set([cell(&["a", "b"])]));

        let coarse = Value::set([cell(&["a", "b"]), cell(&["c"]), cell(&["d"])]);
        let intra = call("Intra", &[cell(&["b", "c"]), coarse]);
        assert_eq!(intra, Value::set([cell(&["a", "c"]), cell(&["b", "c"])]));
    }

    #[test]
    fn set_difference_and_cardinality() {
        let s = Value::set([Value::nat(1), Value::nat(2)]);
        let t = Value::set([Value::nat(2)]);
        assert_eq!(call("-", &[s.clone(), t]), Value::set([Value::nat(1)]));
        assert_eq!(call("abs", &[s]), Value::nat(2));
        assert_eq!(call("abs", &[Value::int(-3)]), Value::nat(3));
    }
}
