use std::fmt::Write;

use super::Module;
use crate::term::{Rule, Term};
use crate::vocab::{Binding, SymbolKind, Vocabulary};

// Precedence levels; higher binds tighter.
const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;
const CMP: u8 = 4;
const ADD: u8 = 5;
const MUL: u8 = 6;
const ATOM: u8 = 7;

fn infix_level(op: &str) -> Option<u8> {
    match op {
        "or" => Some(OR),
        "and" => Some(AND),
        "=" | "<" | ">" | "<=" | ">=" => Some(CMP),
        "+" | "-" => Some(ADD),
        "*" | "/" => Some(MUL),
        _ => None,
    }
}

fn level(t: &Term) -> u8 {
    match t {
        Term::App(h, a) if a.len() == 2 => infix_level(h).unwrap_or(ATOM),
        Term::App(h, a) if h == "not" && a.len() == 1 => match &a[0] {
            Term::App(e, b) if e == "=" && b.len() == 2 => CMP,
            _ => NOT,
        },
        _ => ATOM,
    }
}

fn term_at(out: &mut String, t: &Term, min: u8) {
    if level(t) < min {
        out.push('(');
        term_into(out, t);
        out.push(')');
    } else {
        term_into(out, t);
    }
}

fn term_into(out: &mut String, t: &Term) {
    match t {
        Term::Lit(v) => {
            let _ = write!(out, "{v}");
        }
        Term::App(h, a) if a.len() == 2 && infix_level(h).is_some() => {
            let lv = infix_level(h).unwrap();
            // `and`/`or` and arithmetic associate left; comparisons do not associate
            let (lmin, rmin) = if lv == CMP { (lv + 1, lv + 1) } else { (lv, lv + 1) };
            term_at(out, &a[0], lmin);
            let _ = write!(out, " {h} ");
            term_at(out, &a[1], rmin);
        }
        Term::App(h, a) if h == "not" && a.len() == 1 => match &a[0] {
            Term::App(e, b) if e == "=" && b.len() == 2 => {
                term_at(out, &b[0], CMP + 1);
                out.push_str(" != ");
                term_at(out, &b[1], CMP + 1);
            }
            inner => {
                out.push_str("not ");
                term_at(out, inner, NOT);
            }
        },
        Term::App(h, a) if h == "abs" && a.len() == 1 => {
            out.push('|');
            term_into(out, &a[0]);
            out.push('|');
        }
        Term::App(h, a) => {
            out.push_str(h);
            if !a.is_empty() {
                out.push('(');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    term_into(out, x);
                }
                out.push(')');
            }
        }
    }
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    term_into(&mut s, t);
    s
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// `closed` demands that the printed rule not end in an `if` without `else`,
/// because an `else` of an enclosing conditional follows.
fn rule_into(out: &mut String, r: &Rule, depth: usize, closed: bool) {
    match r {
        Rule::Par(children) if children.is_empty() => out.push_str("skip"),
        Rule::Par(children) => {
            out.push_str("par {\n");
            for (i, c) in children.iter().enumerate() {
                indent(out, depth + 1);
                rule_into(out, c, depth + 1, false);
                if i + 1 < children.len() {
                    out.push(';');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push('}');
        }
        Rule::Assign { head, args, rhs } => {
            term_into(out, &Term::App(head.clone(), args.clone()));
            out.push_str(" := ");
            term_into(out, rhs);
        }
        Rule::If { guard, then, els } => {
            out.push_str("if ");
            term_into(out, guard);
            out.push_str(" then\n");
            let print_else = closed || !els.is_skip();
            indent(out, depth + 1);
            rule_into(out, then, depth + 1, print_else);
            if print_else {
                out.push('\n');
                indent(out, depth);
                if let Rule::If { .. } = **els {
                    out.push_str("else ");
                    rule_into(out, els, depth, closed);
                } else {
                    out.push_str("else\n");
                    indent(out, depth + 1);
                    rule_into(out, els, depth + 1, closed);
                }
            }
        }
    }
}

pub fn print_rule(r: &Rule) -> String {
    let mut s = String::new();
    rule_into(&mut s, r, 0, false);
    s
}

/// Renders a module in the concrete syntax; `parse_module` of the result
/// yields an equal module.
pub fn print_module(m: &Module) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "module {}\n", m.name);
    let obligatory = Vocabulary::obligatory();
    let mut any = false;
    for sym in m.vocab.iter() {
        if obligatory.get(&sym.name) == Some(sym) {
            continue;
        }
        any = true;
        let kw = match sym.kind {
            SymbolKind::Static => "static",
            SymbolKind::Dynamic { .. } => "dynamic",
            SymbolKind::External => "external",
        };
        let _ = write!(out, "{kw} fn {}/{}", sym.name, sym.arity);
        if sym.relational {
            out.push_str(" relational");
        }
        if let SymbolKind::Dynamic { default } = &sym.kind {
            out.push_str(" default ");
            term_into(&mut out, default);
        }
        match m.bindings.get(&sym.name) {
            Some(Binding::Builtin(b)) | Some(Binding::Chooser(b)) => {
                let _ = write!(out, " = @{b}");
            }
            Some(Binding::Const(v)) => {
                let _ = write!(out, " = {v}");
            }
            None => {}
        }
        out.push('\n');
    }
    if any {
        out.push('\n');
    }
    for s in &m.init {
        let _ = writeln!(out, "init {s}");
    }
    if let Some(io) = &m.io {
        if !io.inputs.is_empty() {
            let _ = writeln!(out, "input {}", io.inputs.join(", "));
        }
        let _ = writeln!(out, "output {}", io.output);
    }
    if !m.init.is_empty() || m.io.is_some() {
        out.push('\n');
    }
    out.push_str("program\n  ");
    rule_into(&mut out, &m.program, 1, false);
    out.push('\n');
    out
}
