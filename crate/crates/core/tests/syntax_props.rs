use proptest::prelude::*;

use revasm::harness::{random_module, SizeBounds};
use revasm::syntax::{parse_term, parse_value, print_term};
use revasm::{corpus, parse_module, print_module, Term, Value};

fn value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(Value::Bool),
        (-1000i64..1000, 1i64..50).prop_map(|(n, d)| Value::ratio(n, d)),
        Just(Value::Nil),
        "[a-z][a-z0-9_]{0,5}".prop_map(|s| Value::atom(&s)),
    ];
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Value::set),
            prop::collection::vec(inner, 0..4).prop_map(Value::tuple),
        ]
    })
}

const BINARY: &[&str] = &["+", "-", "*", "/", "<", ">", "<=", ">=", "=", "and", "or", "g"];

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        value().prop_map(Term::lit),
        prop::sample::select(vec!["x", "y", "k"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            (prop::sample::select(BINARY), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Term::app(op, vec![a, b])),
            inner.clone().prop_map(Term::not),
            inner.clone().prop_map(|t| Term::app("abs", vec![t])),
            inner.clone().prop_map(Term::inc),
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            prop::collection::vec(inner, 3).prop_map(|v| Term::app("h", v)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn literals_round_trip(v in value()) {
        prop_assert_eq!(parse_value(&v.to_string()).unwrap(), v);
    }

    #[test]
    fn terms_round_trip(t in term()) {
        let text = print_term(&t);
        prop_assert_eq!(parse_term(&text).unwrap(), t, "{}", text);
    }
}

#[test]
fn modules_round_trip() {
    let mut mods: Vec<_> = corpus::ALL.iter().map(|(_, src)| corpus::load(src)).collect();
    for seed in 0..500 {
        let externals = seed % 4 == 0;
        mods.push(random_module(
            seed,
            SizeBounds {
                externals,
                ..SizeBounds::default()
            },
        ));
    }
    for m in &mods {
        let text = print_module(m);
        assert_eq!(&parse_module(&text).unwrap(), m, "{text}");
        assert_eq!(print_module(&parse_module(&text).unwrap()), text);
    }
}
