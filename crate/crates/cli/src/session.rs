//! The interactive stepper: `f` fires a step of B, `b` a step of C.

use std::io::{self, BufRead, Write};

use revasm::interp::{step, StepOutcome};
use revasm::syntax::parse_term;
use revasm::{initial_state, Error, Oracle, Reversification, Seed, Structure, Value};

pub struct Session<'a> {
    arts: &'a Reversification,
    state: Structure,
    oracle: Oracle,
}

impl<'a> Session<'a> {
    pub fn new(arts: &'a Reversification, overrides: &[Seed], seed: Option<u64>) -> Result<Self, Error> {
        Ok(Session {
            arts,
            state: initial_state(&arts.b, overrides)?,
            oracle: Oracle::live(seed),
        })
    }

    fn counter(&self) -> Value {
        self.state
            .var(&self.arts.catalog.counter)
            .cloned()
            .unwrap_or(Value::Nil)
    }

    fn is_terminal(&mut self) -> bool {
        let k = self.counter().as_usize().unwrap_or(0);
        let mut probe = Oracle::live(None);
        matches!(
            step(&self.state, &self.arts.b.program, &mut probe, k),
            Ok(StepOutcome::Terminal)
        )
    }

    fn forward(&mut self) -> String {
        let k = self.counter().as_usize().unwrap_or(0);
        match step(&self.state, &self.arts.b.program, &mut self.oracle, k) {
            Ok(StepOutcome::Terminal) => "terminal state: no step to take".into(),
            Ok(StepOutcome::Contradictory(c)) => format!("contradictory update set: {c}"),
            Ok(StepOutcome::Next(delta, next)) => {
                self.state = next;
                let principal: Vec<String> = delta
                    .iter()
                    .filter(|u| self.arts.source.vocab.contains(&u.location.symbol))
                    .map(|u| u.to_string())
                    .collect();
                format!("forward: {}", principal.join(", "))
            }
            Err(e) => format!("error: {e}"),
        }
    }

    fn back(&mut self) -> String {
        if self.counter() == Value::nat(0) {
            return "at initial state".into();
        }
        match step(&self.state, &self.arts.c.program, &mut Oracle::none(), 0) {
            Ok(StepOutcome::Next(_, prev)) => {
                self.state = prev;
                "back".into()
            }
            Ok(StepOutcome::Terminal) => "at initial state".into(),
            Ok(StepOutcome::Contradictory(c)) => format!("contradictory update set: {c}"),
            Err(e) => format!("error: {e}"),
        }
    }

    fn print(&mut self, text: &str) -> String {
        match parse_term(text) {
            Ok(t) => match self.state.eval(&t, &mut self.oracle) {
                Ok(v) => v.to_string(),
                Err(e) => format!("error: {e}"),
            },
            Err(d) => format!("error: {}", d.message),
        }
    }

    fn status(&mut self) -> String {
        let terminal = if self.is_terminal() { "yes" } else { "no" };
        format!(
            "[{} = {}, terminal: {terminal}]",
            self.arts.catalog.counter,
            self.counter()
        )
    }

    /// Reads commands until `q` or end of input.
    pub fn drive(&mut self, input: impl BufRead, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "{} {}", self.arts.source.name, self.status())?;
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let reply = match cmd {
                "" => continue,
                "q" => break,
                "f" => self.forward(),
                "b" => self.back(),
                "p" if !rest.trim().is_empty() => self.print(rest.trim()),
                _ => "commands: f (forward), b (back), p <term> (print), q (quit)".into(),
            };
            writeln!(out, "{reply} {}", self.status())?;
        }
        Ok(())
    }
}
