use crate::error::Error;
use crate::interp::{self, run, run_from, update_set, Oracle, StopReason, Trace, DEFAULT_BUDGET};
use crate::reversify::{reversify, reversify_with, Options, Reversification};
use crate::structure::{check_consistent, Structure, UpdateSet};
use crate::syntax::{Module, Seed};
use crate::value::Value;
use crate::vocab::Vocabulary;

use super::CheckReport;

/// Run parameters shared by the checks.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Extra initial-state seeds on top of the module's own.
    pub overrides: Vec<Seed>,
    /// Seed for external choosers; `None` picks least candidates.
    pub seed: Option<u64>,
    pub budget: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            overrides: Vec::new(),
            seed: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl CheckConfig {
    pub fn with_budget(budget: usize) -> CheckConfig {
        CheckConfig {
            budget,
            ..CheckConfig::default()
        }
    }
}

const DIFF_LINES: usize = 6;

fn diff_summary(expected: &Structure, actual: &Structure) -> (String, String) {
    let lines = expected.diff(actual, DIFF_LINES);
    ("state equal to the forward run".into(), lines.join("; "))
}

fn note_contradiction(report: &mut CheckReport, trace: &Trace, what: &str) {
    if let Some(c) = &trace.conflict {
        report.note(format!(
            "{what} run is contradictory at step {}: {c}; only the valid prefix is checked",
            trace.steps()
        ));
    }
}

/// Reversifies `a`, runs `B` forward and `C` back from the final state.
pub fn roundtrip_check(a: &Module, cfg: &CheckConfig) -> Result<CheckReport, Error> {
    roundtrip_check_with(a, &Options::default(), cfg)
}

pub fn roundtrip_check_with(a: &Module, opts: &Options, cfg: &CheckConfig) -> Result<CheckReport, Error> {
    let arts = reversify_with(a, opts)?;
    roundtrip_pair(&arts.b, &arts.c, cfg)
}

/// Runs `b` forward, then `c` from the last state for as many steps, and
/// compares the states pairwise. `c` must also halt exactly there.
pub fn roundtrip_pair(b: &Module, c: &Module, cfg: &CheckConfig) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("roundtrip");
    let fwd = run(b, &cfg.overrides, &mut Oracle::live(cfg.seed), cfg.budget)?;
    note_contradiction(&mut report, &fwd, "forward");
    if fwd.stop == StopReason::Budget {
        report.note(format!(
            "forward run stopped by the budget of {} steps",
            cfg.budget
        ));
    }
    if c.vocab != b.vocab {
        report.fail(0, "vocabulary", "Voc(C) = Voc(B)", "vocabularies differ");
        return Ok(report);
    }
    let n = fwd.steps();
    report.stats.forward_steps = n;
    report.stats.runs = 2;
    let back = run_from(fwd.last().clone(), &c.program, &mut Oracle::none(), n + 1)?;
    report.stats.backward_steps = back.steps();
    for (j, y) in back.states.iter().enumerate().take(n + 1) {
        let x = &fwd.states[n - j];
        report.stats.states_compared += 1;
        if x != y {
            let (e, a) = diff_summary(x, y);
            report.fail(j, "state mismatch", e, a);
        }
    }
    if back.steps() < n {
        report.fail(
            back.steps(),
            "inverse stopped early",
            format!("{n} backward steps"),
            format!("{:?} after {} steps", back.stop, back.steps()),
        );
    } else if back.steps() > n || back.stop != StopReason::Terminal {
        report.fail(
            n,
            "inverse did not halt at the initial state",
            "terminal state",
            format!("{:?} after {} steps", back.stop, back.steps()),
        );
    }
    Ok(report)
}

fn principal(delta: &UpdateSet, voc: &Vocabulary) -> UpdateSet {
    delta
        .iter()
        .filter(|u| voc.contains(&u.location.symbol))
        .cloned()
        .collect()
}

fn show_updates(delta: &UpdateSet) -> String {
    let items: Vec<String> = delta
        .iter()
        .map(|u| format!("{} := {}", u.location, u.value))
        .collect();
    format!("{{{}}}", items.join(", "))
}

/// Runs `a`, replays its external log through `b`, and checks that `b`
/// simulates `a` step for step on the vocabulary of `a`.
pub fn faithfulness_check(a: &Module, b: &Module, cfg: &CheckConfig) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("faithfulness");
    if !a.vocab.is_included_in(&b.vocab) {
        report.fail(0, "vocabulary", "Voc(A) included in Voc(B)", "not included");
        return Ok(report);
    }
    if let Some(s) = b
        .vocab
        .iter()
        .find(|s| !a.vocab.contains(&s.name) && !s.is_dynamic())
    {
        report.fail(
            0,
            "vocabulary",
            "every new symbol dynamic",
            format!("`{}` is not", s.name),
        );
        return Ok(report);
    }
    let ta = run(a, &cfg.overrides, &mut Oracle::live(cfg.seed), cfg.budget)?;
    note_contradiction(&mut report, &ta, "A");
    // B may evaluate externals that A did not reach (a hoisted guard, say);
    // such values cannot influence the principal updates, so they are drawn
    // fresh instead of counted as a log miss
    let mut oracle = Oracle::replay_or_live(&ta.external_log, cfg.seed);
    let tb = run(b, &cfg.overrides, &mut oracle, cfg.budget)?;
    report.stats.runs = 2;
    report.stats.forward_steps = ta.steps();

    let y0 = ta.states[0].uninformative_expansion(&b.vocab)?;
    if y0 != tb.states[0] {
        let lines = y0.diff(&tb.states[0], DIFF_LINES).join("; ");
        report.fail(
            0,
            "initial state",
            "uninformative expansion of A's initial state",
            lines,
        );
    }
    for (i, (x, y)) in ta.states.iter().zip(&tb.states).enumerate() {
        report.stats.states_compared += 1;
        let r = y.reduct(&a.vocab)?;
        if &r != x {
            let lines = x.diff(&r, DIFF_LINES).join("; ");
            report.fail(i, "reduct mismatch", "reduct equal to A's state", lines);
        }
    }
    for (i, (da, db)) in ta.updates.iter().zip(&tb.updates).enumerate() {
        let p = principal(db, &a.vocab);
        if &p != da {
            report.fail(i, "principal updates", show_updates(da), show_updates(&p));
        }
        if let Err(c) = check_consistent(db) {
            report.fail(i, "ancillary updates", "consistent", c);
        }
    }
    if ta.steps() != tb.steps() || ta.stop != tb.stop {
        report.fail(
            ta.steps().min(tb.steps()),
            "run length",
            format!("{:?} after {} steps", ta.stop, ta.steps()),
            format!("{:?} after {} steps", tb.stop, tb.steps()),
        );
    }
    Ok(report)
}

/// Green-light and default-value lemmas along the run of `reversify(a).B`.
pub fn lemma_checks(a: &Module, cfg: &CheckConfig) -> Result<CheckReport, Error> {
    lemma_checks_with(&reversify(a)?, cfg)
}

pub fn lemma_checks_with(arts: &Reversification, cfg: &CheckConfig) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("lemmas");
    let b = &arts.b;
    let trace = run(b, &cfg.overrides, &mut Oracle::live(cfg.seed), cfg.budget)?;
    note_contradiction(&mut report, &trace, "forward");
    report.stats.forward_steps = trace.steps();
    report.stats.runs = 1;
    let counter = &arts.catalog.counter;
    let ancillaries: Vec<String> = arts
        .catalog
        .entries
        .iter()
        .flat_map(|e| e.fire.iter().chain(&e.recorders).cloned())
        .collect();
    for (i, y) in trace.states.iter().enumerate() {
        report.stats.states_compared += 1;
        // γ and the update set are probed with one oracle so that external
        // values agree between them
        let mut probe = Oracle::live(cfg.seed.map(|s| s.wrapping_add(i as u64)));
        let gamma = y.eval(&arts.green_light, &mut probe);
        let delta = update_set(y, &b.program, &mut probe, 0);
        match (gamma, delta) {
            (Ok(g), Ok(d)) => {
                if g.is_true() == d.is_empty() {
                    report.fail(
                        i,
                        "green light",
                        format!("γ = {} iff nonterminal", arts.green_light),
                        format!("γ = {g}, {} updates", d.len()),
                    );
                }
            }
            (Err(e), _) | (_, Err(e)) => report.fail(i, "green light", "evaluable", e),
        }
        let k = y.var(counter).cloned().unwrap_or(Value::Nil);
        if k != Value::nat(i as u64) {
            report.fail(i, "step counter", i, &k);
        }
        for name in &ancillaries {
            let table = y.table(name).expect("ancillary table");
            for (args, v) in table.entries() {
                let beyond = match args.first().and_then(Value::as_usize) {
                    Some(j) => j > i || j == 0,
                    None => true,
                };
                if beyond {
                    report.fail(
                        i,
                        "ancillary default",
                        format!("{name} default beyond index {i}"),
                        format!(
                            "{name}({}) = {v}",
                            args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
                        ),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// The outcome of one run viewed as a function evaluation.
#[derive(Debug, Clone, PartialEq)]
enum Outcome {
    Value(Value),
    Budget,
    Contradictory,
}

fn outcome(t: &Trace, output: &str) -> Outcome {
    match t.stop {
        StopReason::Terminal => Outcome::Value(t.last().var(output).cloned().unwrap_or(Value::Nil)),
        StopReason::Budget => Outcome::Budget,
        StopReason::Contradictory => Outcome::Contradictory,
    }
}

/// Checks that `a` and `reversify(a).B` compute the same partial function.
pub fn function_check(a: &Module, inputs: &[Vec<Value>], budget: usize) -> Result<CheckReport, Error> {
    function_check_pair(a, &reversify(a)?.b, inputs, budget)
}

pub fn function_check_pair(
    a: &Module,
    b: &Module,
    inputs: &[Vec<Value>],
    budget: usize,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("function");
    let Some(io) = &a.io else {
        return Err(Error::Invalid(format!(
            "module `{}` declares no input/output",
            a.name
        )));
    };
    for (case, values) in inputs.iter().enumerate() {
        if values.len() != io.inputs.len() {
            return Err(Error::Invalid(format!(
                "input {case} has {} value(s), `{}` takes {}",
                values.len(),
                a.name,
                io.inputs.len()
            )));
        }
        let seeds: Vec<Seed> = io
            .inputs
            .iter()
            .zip(values)
            .map(|(name, v)| Seed::new(name.clone(), vec![], v.clone()))
            .collect();
        let ta = run(a, &seeds, &mut Oracle::live(Some(case as u64)), budget)?;
        let tb = interp::replay_run(b, &seeds, &ta.external_log, budget)?;
        report.stats.runs += 2;
        report.stats.forward_steps += ta.steps();
        report.stats.states_compared += 1;
        let (oa, ob) = (outcome(&ta, &io.output), outcome(&tb, &io.output));
        if oa == Outcome::Budget {
            report.note(format!("input {case}: A exceeds the budget of {budget} steps"));
        }
        if oa != ob {
            report.fail(case, "output", format!("{oa:?}"), format!("{ob:?}"));
        }
    }
    Ok(report)
}
