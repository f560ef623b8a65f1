//! The three principal examples run end to end.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use revasm::harness::{roundtrip_check, CheckConfig};
use revasm::{corpus, interp, Oracle, StopReason, Value};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Plain bisection over rationals: step count and the value assigned to c.
fn bisection_oracle(mut a: BigRational, mut b: BigRational) -> (usize, BigRational) {
    let eps = q(1, 100);
    let third = q(1, 3);
    let mut steps = 0;
    loop {
        steps += 1;
        let mid = (&a + &b) / q(2, 1);
        let f = &mid - &third;
        if f < -eps.clone() {
            a = mid;
        } else if f > eps {
            b = mid;
        } else {
            return (steps, mid);
        }
    }
}

#[test]
fn bisection_matches_the_oracle() {
    let (steps, c) = bisection_oracle(q(0, 1), q(1, 1));
    // pinned from the oracle
    assert_eq!((steps, c.clone()), (6, q(21, 64)));

    let m = corpus::bisection();
    let t = interp::run(&m, &[], &mut Oracle::none(), 100).unwrap();
    assert_eq!(t.stop, StopReason::Terminal);
    assert_eq!(t.steps(), steps);
    assert_eq!(t.last().var("c").unwrap(), &Value::Num(c.clone()));
    let fc = c - q(1, 3);
    assert!(fc.clone() < q(1, 100) && -fc < q(1, 100));
    for x in &t.states[..t.steps()] {
        assert_eq!(x.var("c").unwrap(), &Value::Nil);
    }

    let r = roundtrip_check(&m, &CheckConfig::default()).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.stats.backward_steps, 6);
}

#[test]
fn bisection_oracle_agrees_on_other_brackets() {
    let m = corpus::bisection();
    for (a, b) in [((-1, 1), (1, 1)), ((1, 4), (1, 2)), ((0, 1), (3, 1))] {
        let (steps, c) = bisection_oracle(q(a.0, a.1), q(b.0, b.1));
        let seeds = vec![
            revasm::Seed::new("a", vec![], Value::ratio(a.0, a.1)),
            revasm::Seed::new("b", vec![], Value::ratio(b.0, b.1)),
        ];
        let t = interp::run(&m, &seeds, &mut Oracle::none(), 100).unwrap();
        assert_eq!(t.steps(), steps);
        assert_eq!(t.last().var("c").unwrap(), &Value::Num(c));
    }
}

#[test]
fn round_trip_restores_the_bisection_bracket() {
    let m = corpus::bisection();
    let arts = revasm::reversify(&m).unwrap();
    let fwd = interp::run(&arts.b, &[], &mut Oracle::none(), 100).unwrap();
    let back = interp::run_from(fwd.last().clone(), &arts.c.program, &mut Oracle::none(), 100).unwrap();
    let x = back.last();
    assert_eq!(x.var("a").unwrap(), &Value::nat(0));
    assert_eq!(x.var("b").unwrap(), &Value::nat(1));
    assert_eq!(x.var("c").unwrap(), &Value::Nil);
    assert_eq!(x.var("__k").unwrap(), &Value::nat(0));
    assert_eq!(back.stop, StopReason::Terminal);
}

#[test]
fn sort_golden_values() {
    let t = interp::run(&corpus::sort(), &[], &mut Oracle::none(), 100).unwrap();
    assert_eq!(t.steps(), 10);
    let g: Vec<Value> = (0..7)
        .map(|i| {
            t.states[3]
                .get(&revasm::Location::new("g", vec![Value::nat(i)]))
                .unwrap()
                .clone()
        })
        .collect();
    assert_eq!(g, [1, 0, 0, 1, 0, 0, 1].map(Value::nat));
    let f: Vec<Value> = (0..3)
        .map(|i| {
            t.last()
                .get(&revasm::Location::new("f", vec![Value::nat(i)]))
                .unwrap()
                .clone()
        })
        .collect();
    assert_eq!(f, [0, 3, 6].map(Value::nat));
}

fn cell_of(p: &Value) -> BTreeMap<Value, Value> {
    let mut m = BTreeMap::new();
    for cell in p.as_set().unwrap() {
        for v in cell.as_set().unwrap() {
            m.insert(v.clone(), cell.clone());
        }
    }
    m
}

#[test]
fn karger_contracts_to_two_cells() {
    let m = corpus::karger();
    let edges = m.bindings["E"].clone();
    let revasm::Binding::Const(e) = edges else {
        panic!()
    };
    for seed in [None, Some(1), Some(2), Some(3), Some(42)] {
        let t = interp::run(&m, &[], &mut Oracle::live(seed), 50).unwrap();
        assert_eq!(t.stop, StopReason::Terminal);
        assert_eq!(t.steps(), 2);
        let p = t.last().var("P").unwrap();
        assert_eq!(p.as_set().unwrap().len(), 2);
        // Inter holds exactly the edges across the final cells
        let cells = cell_of(p);
        let across: BTreeSet<Value> = e
            .as_set()
            .unwrap()
            .iter()
            .filter(|edge| {
                let ends: Vec<&Value> = edge.as_set().unwrap().iter().collect();
                cells[ends[0]] != cells[ends[1]]
            })
            .cloned()
            .collect();
        assert_eq!(t.last().var("Inter").unwrap(), &Value::Set(across));

        // R(Inter) is evaluated twice per step and given one value
        for step in 0..t.steps() {
            let calls: Vec<_> = t.external_log.iter().filter(|c| c.step == step).collect();
            assert_eq!(calls.len(), 2);
            assert_eq!(calls[0].value, calls[1].value);
            assert_eq!(calls[0].args, calls[1].args);
        }

        let cfg = CheckConfig {
            seed,
            ..CheckConfig::default()
        };
        let arts = revasm::reversify(&m).unwrap();
        let fwd = interp::run(&arts.b, &[], &mut Oracle::live(seed), 50).unwrap();
        let back = interp::run_from(fwd.last().clone(), &arts.c.program, &mut Oracle::none(), 50).unwrap();
        let x = back.last();
        let finest = Value::set(["a", "b", "c", "d"].map(|v| Value::set([Value::atom(v)])));
        assert_eq!(x.var("P").unwrap(), &finest);
        assert_eq!(x.var("Inter").unwrap(), &e);
        assert!(roundtrip_check(&m, &cfg).unwrap().passed());
    }
}
