//! Universe elements.
//!
//! Every term denotes a [`Value`]. Numbers are exact rationals so that state
//! comparison during reversal checks is plain structural equality.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

/// A universe element.
///
/// The derived ordering is the canonical total order used for deterministic
/// printing: booleans, then numbers, then `nil`, atoms, sets, tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bool(bool),
    Num(BigRational),
    Nil,
    Atom(Arc<str>),
    Set(BTreeSet<Value>),
    Tuple(Vec<Value>),
}

impl Value {
    pub const TRUE: Value = Value::Bool(true);
    pub const FALSE: Value = Value::Bool(false);

    pub fn nat(n: u64) -> Value {
        Value::Num(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn int(n: i64) -> Value {
        Value::Num(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer/denom`; panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Value {
        Value::Num(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn atom(name: &str) -> Value {
        Value::Atom(Arc::from(name))
    }

    pub fn set<I: IntoIterator<Item = Value>>(items: I) -> Value {
        Value::Set(items.into_iter().collect())
    }

    pub fn tuple<I: IntoIterator<Item = Value>>(items: I) -> Value {
        Value::Tuple(items.into_iter().collect())
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Value::Bool(true))
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, Value::Bool(_))
    }

    pub fn as_num(&self) -> Option<&BigRational> {
        match self {
            Value::Num(q) => Some(q),
            _ => None,
        }
    }

    /// True for the natural numbers 0, 1, 2, ...
    pub fn is_natural(&self) -> bool {
        match self {
            Value::Num(q) => q.is_integer() && !q.is_negative(),
            _ => false,
        }
    }

    /// The value as a machine integer, if it is a natural that fits.
    pub fn as_usize(&self) -> Option<usize> {
        match self {
            Value::Num(q) if q.is_integer() && !q.is_negative() => usize::try_from(q.to_integer()).ok(),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Value>> {
        match self {
            Value::Set(s) => Some(s),
            _ => None,
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<BigRational> for Value {
    fn from(q: BigRational) -> Self {
        Value::Num(q)
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Literal syntax as accepted by the module parser.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(true) => f.write_str("true"),
            Value::Bool(false) => f.write_str("false"),
            Value::Num(q) => write_num(f, q),
            Value::Nil => f.write_str("nil"),
            Value::Atom(a) => write!(f, "'{a}"),
            Value::Set(items) => {
                f.write_str("{")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
            Value::Tuple(items) => {
                f.write_str("(")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                if items.len() == 1 {
                    f.write_str(",")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// JSON form: booleans and `nil` map to JSON `true`/`false`/`null`; the
/// remaining variants are single-key objects (`{"num": "1/3"}`,
/// `{"atom": "a"}`, `{"set": [...]}`, `{"tuple": [...]}`).
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Nil => s.serialize_unit(),
            Value::Num(q) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("num", &NumText(q).to_string())?;
                m.end()
            }
            Value::Atom(a) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("atom", a.as_ref())?;
                m.end()
            }
            Value::Set(items) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("set", &SeqRef(items.iter()))?;
                m.end()
            }
            Value::Tuple(items) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("tuple", &SeqRef(items.iter()))?;
                m.end()
            }
        }
    }
}

struct NumText<'a>(&'a BigRational);

impl fmt::Display for NumText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_num(f, self.0)
    }
}

struct SeqRef<I>(I);

impl<'a, I> Serialize for SeqRef<I>
where
    I: Iterator<Item = &'a Value> + Clone,
{
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(None)?;
        for v in self.0.clone() {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

pub(crate) fn zero() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn booleans_and_nil_are_not_numbers() {
        let nil = Value::Nil;
        assert_ne!(nil, Value::nat(0));
        assert_ne!(Value::FALSE, Value::nat(0));
        assert!(!nil.is_natural());
        assert!(Value::nat(3).is_natural());
        assert!(!Value::ratio(1, 2).is_natural());
        assert!(!Value::int(-1).is_natural());
    }

    #[test]
    fn canonical_order() {
        let mut vs = [
            Value::tuple([]),
            Value::atom("b"),
            Value::Nil,
            Value::nat(2),
            Value::set([]),
            Value::TRUE,
            Value::ratio(1, 2),
            Value::atom("a"),
        ];
        vs.sort();
        let printed: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        assert_eq!(printed, ["true", "1/2", "2", "nil", "'a", "'b", "{}", "()"]);
    }

    #[test]
    fn display_literals() {
        assert_eq!(Value::tuple([Value::nat(1)]).to_string(), "(1,)");
        assert_eq!(
            Value::set([Value::set([Value::atom("a")]), Value::int(-3)]).to_string(),
            "{-3, {'a}}"
        );
    }

    #[test]
    fn json_form() {
        let v = Value::tuple([Value::Nil, Value::ratio(-1, 3), Value::atom("x")]);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"tuple":[null,{"num":"-1/3"},{"atom":"x"}]}"#
        );
    }
}
