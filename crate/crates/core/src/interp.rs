//! Execution of programs: update sets, steps, runs and external oracles.

use std::collections::HashMap;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::builtins::Chooser;
use crate::error::Error;
use crate::structure::{check_consistent, Conflict, Externals, Location, Structure, Update, UpdateSet};
use crate::syntax::{Module, Seed};
use crate::term::Rule;
use crate::value::Value;
use crate::vocab::Symbol;

pub const DEFAULT_BUDGET: usize = 10_000;

/// One evaluation of an external symbol. Memo hits are logged as well, so a
/// step that evaluates `R(Inter)` twice leaves two equal entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExternalCall {
    pub step: usize,
    pub symbol: String,
    pub args: Vec<Value>,
    pub value: Value,
}

enum Mode {
    None,
    Live(Option<ChaCha8Rng>),
    Replay {
        table: HashMap<(usize, String, Vec<Value>), Value>,
        fallback: Option<Option<ChaCha8Rng>>,
    },
}

/// Supplies values of external symbols. Values are stable within a step and
/// drawn afresh at the next one.
pub struct Oracle {
    mode: Mode,
    step: usize,
    memo: HashMap<(String, Vec<Value>), Value>,
    log: Vec<ExternalCall>,
}

impl Oracle {
    fn with(mode: Mode) -> Oracle {
        Oracle {
            mode,
            step: 0,
            memo: HashMap::new(),
            log: Vec::new(),
        }
    }

    /// Fails on any external call.
    pub fn none() -> Oracle {
        Oracle::with(Mode::None)
    }

    /// Uses the bound choosers: the least candidate when `seed` is `None`,
    /// otherwise a uniform pick from a generator seeded with `seed`.
    pub fn live(seed: Option<u64>) -> Oracle {
        Oracle::with(Mode::Live(seed.map(ChaCha8Rng::seed_from_u64)))
    }

    /// Answers every call from a previously recorded log.
    pub fn replay(log: &[ExternalCall]) -> Oracle {
        let table = log
            .iter()
            .map(|c| ((c.step, c.symbol.clone(), c.args.clone()), c.value.clone()))
            .collect();
        Oracle::with(Mode::Replay {
            table,
            fallback: None,
        })
    }

    /// Answers logged calls from `log` and draws the rest as [`Oracle::live`]
    /// would. Useful when a program evaluates externals that the logged run
    /// never reached.
    pub fn replay_or_live(log: &[ExternalCall], seed: Option<u64>) -> Oracle {
        let mut o = Oracle::replay(log);
        if let Mode::Replay { fallback, .. } = &mut o.mode {
            *fallback = Some(seed.map(ChaCha8Rng::seed_from_u64));
        }
        o
    }

    /// Moves to step `step`, forgetting values given at other steps.
    pub fn at_step(&mut self, step: usize) {
        if step != self.step {
            self.memo.clear();
            self.step = step;
        }
    }

    pub fn log(&self) -> &[ExternalCall] {
        &self.log
    }

    pub fn take_log(&mut self) -> Vec<ExternalCall> {
        std::mem::take(&mut self.log)
    }

    fn draw(&mut self, symbol: &Symbol, chooser: Chooser, args: &[Value]) -> Result<Value, Error> {
        match &mut self.mode {
            Mode::None => Err(Error::NoOracle(symbol.name.clone())),
            Mode::Replay { table, fallback } => {
                if let Some(v) = table.get(&(self.step, symbol.name.clone(), args.to_vec())) {
                    return Ok(v.clone());
                }
                match fallback {
                    Some(rng) => Ok(live_draw(rng, chooser, args)),
                    None => Err(Error::LogMiss {
                        step: self.step,
                        symbol: symbol.name.clone(),
                        args: args.to_vec(),
                    }),
                }
            }
            Mode::Live(rng) => Ok(live_draw(rng, chooser, args)),
        }
    }
}

fn live_draw(rng: &mut Option<ChaCha8Rng>, chooser: Chooser, args: &[Value]) -> Value {
    match chooser {
        Chooser::Coin => Value::Bool(rng.as_mut().is_some_and(|r| r.gen())),
        Chooser::Choose => {
            let items: Box<dyn Iterator<Item = &Value>> = match args.first() {
                Some(Value::Set(s)) => Box::new(s.iter()),
                Some(Value::Tuple(t)) => Box::new(t.iter()),
                _ => Box::new(std::iter::empty()),
            };
            let pick = match rng {
                Some(r) => items.choose(r),
                None => items.min(),
            };
            pick.cloned().unwrap_or(Value::Nil)
        }
    }
}

impl Externals for Oracle {
    fn call(&mut self, symbol: &Symbol, chooser: Chooser, args: Vec<Value>) -> Result<Value, Error> {
        let key = (symbol.name.clone(), args);
        let value = match self.memo.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = self.draw(symbol, chooser, &key.1)?;
                self.memo.insert(key.clone(), v.clone());
                v
            }
        };
        self.log.push(ExternalCall {
            step: self.step,
            symbol: key.0,
            args: key.1,
            value: value.clone(),
        });
        Ok(value)
    }
}

/// The update set generated by `rule` in `x`. A guard selects the then
/// branch only when it evaluates to `true`.
pub fn update_set(x: &Structure, rule: &Rule, oracle: &mut Oracle, step: usize) -> Result<UpdateSet, Error> {
    oracle.at_step(step);
    let mut out = UpdateSet::new();
    collect(x, rule, oracle, &mut out)?;
    Ok(out)
}

fn collect(x: &Structure, rule: &Rule, ext: &mut dyn Externals, out: &mut UpdateSet) -> Result<(), Error> {
    match rule {
        Rule::Assign { head, args, rhs } => {
            let args = args
                .iter()
                .map(|a| x.eval(a, ext))
                .collect::<Result<Vec<_>, _>>()?;
            let value = x.eval(rhs, ext)?;
            out.insert(Update {
                location: Location::new(head.clone(), args),
                value,
            });
        }
        Rule::If { guard, then, els } => {
            let branch = if x.eval(guard, ext)?.is_true() { then } else { els };
            collect(x, branch, ext, out)?;
        }
        Rule::Par(children) => {
            for c in children {
                collect(x, c, ext, out)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Terminal,
    Contradictory(Conflict),
    Next(UpdateSet, Structure),
}

/// Fires `program` once in `x`.
pub fn step(x: &Structure, program: &Rule, oracle: &mut Oracle, step: usize) -> Result<StepOutcome, Error> {
    let delta = update_set(x, program, oracle, step)?;
    if delta.is_empty() {
        return Ok(StepOutcome::Terminal);
    }
    if let Err(c) = check_consistent(&delta) {
        return Ok(StepOutcome::Contradictory(c));
    }
    let next = x.apply(&delta)?;
    Ok(StepOutcome::Next(delta, next))
}

/// The initial state of `m`: everywhere default, then the module's seeds,
/// then `overrides`.
pub fn initial_state(m: &Module, overrides: &[Seed]) -> Result<Structure, Error> {
    let mut x = Structure::new(m.vocab.clone(), &m.bindings)?;
    for s in m.init.iter().chain(overrides) {
        if !m.vocab.get(&s.symbol).is_some_and(|sym| sym.is_dynamic()) {
            return Err(Error::Invalid(format!(
                "cannot seed `{}`: not a dynamic symbol of `{}`",
                s.symbol, m.name
            )));
        }
        x.seed(s.location(), s.value.clone())?;
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    Terminal,
    Budget,
    Contradictory,
}

/// A partial computation `X0, ..., Xn` with the update sets between states.
#[derive(Debug, Clone)]
pub struct Trace {
    pub states: Vec<Structure>,
    pub updates: Vec<UpdateSet>,
    pub external_log: Vec<ExternalCall>,
    pub stop: StopReason,
    /// The clash that stopped a contradictory run.
    pub conflict: Option<Conflict>,
}

impl Trace {
    pub fn steps(&self) -> usize {
        self.updates.len()
    }

    pub fn last(&self) -> &Structure {
        self.states.last().expect("a trace has an initial state")
    }

    /// JSON export: per state, each dynamic symbol's non-default entries as
    /// `[args, value]` pairs in canonical order.
    pub fn to_json(&self) -> Json {
        json!({
            "stop_reason": self.stop,
            "steps": self.steps(),
            "states": self.states.iter().map(state_json).collect::<Vec<_>>(),
            "updates": self.updates,
            "external_log": self.external_log,
            "conflict": self.conflict,
        })
    }
}

pub fn state_json(x: &Structure) -> Json {
    let mut map = serde_json::Map::new();
    for (name, table) in x.tables() {
        let entries: Vec<Json> = table.entries().map(|(a, v)| json!([a, v])).collect();
        map.insert(name.to_string(), Json::Array(entries));
    }
    Json::Object(map)
}

/// Runs `program` from `x0` for at most `max_steps` steps.
pub fn run_from(
    x0: Structure,
    program: &Rule,
    oracle: &mut Oracle,
    max_steps: usize,
) -> Result<Trace, Error> {
    let mut states = vec![x0];
    let mut updates = Vec::new();
    let mut stop = StopReason::Budget;
    let mut conflict = None;
    let start = oracle.log().len();
    for i in 0..max_steps {
        match step(states.last().unwrap(), program, oracle, i)? {
            StepOutcome::Terminal => {
                stop = StopReason::Terminal;
                break;
            }
            StepOutcome::Contradictory(c) => {
                stop = StopReason::Contradictory;
                conflict = Some(c);
                break;
            }
            StepOutcome::Next(delta, next) => {
                updates.push(delta);
                states.push(next);
            }
        }
    }
    // a state reached exactly at the budget may still be terminal
    if stop == StopReason::Budget {
        let mut probe = Oracle::live(None);
        if let Ok(d) = update_set(states.last().unwrap(), program, &mut probe, 0) {
            if d.is_empty() {
                stop = StopReason::Terminal;
            }
        }
    }
    Ok(Trace {
        states,
        updates,
        external_log: oracle.log()[start..].to_vec(),
        stop,
        conflict,
    })
}

/// Runs module `m` from its initial state, with `overrides` applied.
pub fn run(m: &Module, overrides: &[Seed], oracle: &mut Oracle, max_steps: usize) -> Result<Trace, Error> {
    run_from(initial_state(m, overrides)?, &m.program, oracle, max_steps)
}

/// Runs `m` answering every external call from `log`.
pub fn replay_run(
    m: &Module,
    overrides: &[Seed],
    log: &[ExternalCall],
    max_steps: usize,
) -> Result<Trace, Error> {
    run(m, overrides, &mut Oracle::replay(log), max_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::syntax::parse_module;

    fn sort_g(x: &Structure, n: usize) -> Vec<Value> {
        (0..n)
            .map(|i| {
                x.get(&Location::new("g", vec![Value::nat(i as u64)]))
                    .unwrap()
                    .clone()
            })
            .collect()
    }

    #[test]
    fn sort_first_update_set() {
        let m = corpus::sort();
        let x = initial_state(&m, &[]).unwrap();
        let d = update_set(&x, &m.program, &mut Oracle::none(), 0).unwrap();
        let want: UpdateSet = [
            Update {
                location: Location::new("k", vec![]),
                value: Value::nat(1),
            },
            Update {
                location: Location::new("g", vec![Value::nat(3)]),
                value: Value::nat(1),
            },
        ]
        .into_iter()
        .collect();
        assert_eq!(d, want);
    }

    #[test]
    fn sort_run_matches_the_illustration() {
        let t = run(&corpus::sort(), &[], &mut Oracle::none(), DEFAULT_BUDGET).unwrap();
        assert_eq!(t.stop, StopReason::Terminal);
        assert_eq!(t.steps(), 10);
        let ones = |v: &[u64]| v.iter().map(|&i| Value::nat(i)).collect::<Vec<_>>();
        assert_eq!(sort_g(&t.states[3], 7), ones(&[1, 0, 0, 1, 0, 0, 1]));
        let f: Vec<_> = (0..3)
            .map(|i| {
                t.last()
                    .get(&Location::new("f", vec![Value::nat(i)]))
                    .unwrap()
                    .clone()
            })
            .collect();
        assert_eq!(f, ones(&[0, 3, 6]));
        for (i, d) in t.updates.iter().enumerate() {
            assert_eq!(t.states[i].apply(d).unwrap(), t.states[i + 1]);
        }
    }

    #[test]
    fn zero_budget_keeps_initial_state() {
        let t = run(&corpus::sort(), &[], &mut Oracle::none(), 0).unwrap();
        assert_eq!(t.states.len(), 1);
        assert_eq!(t.stop, StopReason::Budget);
    }

    #[test]
    fn contradictory_parallel() {
        let m = parse_module(
            "module t\nstatic fn +/2\ndynamic fn v/0 default 0\nprogram par { v := 0 + 1; v := (0 + 1) + 1 }",
        )
        .unwrap();
        let x = initial_state(&m, &[]).unwrap();
        let d = update_set(&x, &m.program, &mut Oracle::none(), 0).unwrap();
        assert_eq!(d.len(), 2);
        assert!(matches!(
            step(&x, &m.program, &mut Oracle::none(), 0).unwrap(),
            StepOutcome::Contradictory(_)
        ));
        let t = run(&m, &[], &mut Oracle::none(), 5).unwrap();
        assert_eq!(t.stop, StopReason::Contradictory);
        assert_eq!(t.states.len(), 1);
    }

    #[test]
    fn bisection_stops_once_c_is_set() {
        let m = corpus::bisection();
        let seeds = crate::syntax::parse_seeds("c = 1/2").unwrap();
        let x = initial_state(&m, &seeds).unwrap();
        assert_eq!(
            step(&x, &m.program, &mut Oracle::none(), 0).unwrap(),
            StepOutcome::Terminal
        );
    }

    #[test]
    fn karger_triangle_merges_two_cells() {
        let mut m = corpus::karger();
        let v = crate::syntax::parse_value;
        m.bind(
            "E",
            crate::vocab::Binding::Const(v("{{'a, 'b}, {'b, 'c}, {'a, 'c}}").unwrap()),
        );
        m.init.clear();
        m.init
            .push(Seed::new("P", vec![], v("{{'a}, {'b}, {'c}}").unwrap()));
        for seed in [None, Some(1), Some(2)] {
            let t = run(&m, &[], &mut Oracle::live(seed), 10).unwrap();
            assert_eq!(t.steps(), 1);
            assert_eq!(t.last().var("P").unwrap().as_set().unwrap().len(), 2);
        }
    }

    #[test]
    fn external_values_are_stable_within_a_step() {
        let m = corpus::karger();
        let t = run(&m, &[], &mut Oracle::live(Some(7)), 100).unwrap();
        assert_eq!(t.stop, StopReason::Terminal);
        assert_eq!(t.steps(), 2);
        assert_eq!(t.external_log.len(), 4);
        for w in t.external_log.chunks(2) {
            assert_eq!(w[0], w[1]);
        }
        let again = replay_run(&m, &[], &t.external_log, 100).unwrap();
        assert_eq!(again.states, t.states);
        let err = replay_run(&m, &[], &t.external_log[..2], 100).unwrap_err();
        assert!(matches!(err, Error::LogMiss { step: 1, .. }));
    }

    #[test]
    fn unseeded_choose_takes_least_edge() {
        let t = run(&corpus::karger(), &[], &mut Oracle::live(None), 1).unwrap();
        assert_eq!(
            t.external_log[0].value,
            crate::syntax::parse_value("{'a, 'b}").unwrap()
        );
    }

    #[test]
    fn overrides_must_target_dynamic_symbols() {
        let m = corpus::sort();
        let bad = crate::syntax::parse_seeds("m = 4").unwrap();
        assert!(initial_state(&m, &bad).is_err());
        let bad = crate::syntax::parse_seeds("zz = 4").unwrap();
        assert!(initial_state(&m, &bad).is_err());
    }

    #[test]
    fn trace_json_shape() {
        let t = run(&corpus::sort(), &[], &mut Oracle::none(), 2).unwrap();
        let j = t.to_json();
        assert_eq!(j["stop_reason"], "budget");
        assert_eq!(j["states"][0]["f"][0], json!([[{"num": "0"}], {"num": "3"}]));
    }
}
