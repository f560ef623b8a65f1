use indexmap::IndexMap;

use super::lexer::{lex, Tok, Token};
use super::{is_symbol_name, validate, Diagnostic, Io, Module, Seed, Site, Spans};
use crate::term::{Rule, Term};
use crate::value::Value;
use crate::vocab::{Binding, Symbol, SymbolKind, Vocabulary};

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    spans: Spans,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(q) => format!("number `{}`", Value::Num(q.clone())),
        Tok::Atom(a) => format!("atom `'{a}`"),
        Tok::P(p) => format!("`{p}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            spans: Spans::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let (l, c) = self.here();
        Err(Diagnostic::error(l, c, msg))
    }

    fn expected<T>(&self, what: &str) -> PResult<T> {
        self.err(format!("expected {what}, found {}", describe(self.peek())))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn is_p(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::P(q) if *q == p)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_p(&mut self, p: &str) -> bool {
        if self.is_p(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.expected(&format!("`{kw}`"))
        }
    }

    fn expect_p(&mut self, p: &str) -> PResult<()> {
        if self.eat_p(p) {
            Ok(())
        } else {
            self.expected(&format!("`{p}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !super::KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.expected("a name"),
        }
    }

    /// A declarable symbol name: identifier, infix operator, or obligatory name.
    fn symbol_name(&mut self) -> PResult<String> {
        let name = match self.peek() {
            Tok::Ident(s) => s.clone(),
            Tok::P(p) => p.to_string(),
            Tok::Num(q) if q == &crate::value::zero() => "0".to_string(),
            _ => return self.expected("a symbol name"),
        };
        if !is_symbol_name(&name) {
            return self.expected("a symbol name");
        }
        self.bump();
        Ok(name)
    }

    fn nat(&mut self) -> PResult<usize> {
        match self.peek() {
            Tok::Num(q) if q.is_integer() => {
                let v = Value::Num(q.clone());
                match v.as_usize() {
                    Some(n) => {
                        self.bump();
                        Ok(n)
                    }
                    None => self.expected("a natural number"),
                }
            }
            _ => self.expected("a natural number"),
        }
    }

    // ---- literals ----

    fn value(&mut self) -> PResult<Value> {
        match self.peek().clone() {
            Tok::Num(q) => {
                self.bump();
                Ok(Value::Num(q))
            }
            Tok::Atom(a) => {
                self.bump();
                Ok(Value::atom(&a))
            }
            Tok::Ident(s) if s == "true" || s == "false" || s == "nil" => {
                self.bump();
                Ok(match s.as_str() {
                    "true" => Value::TRUE,
                    "false" => Value::FALSE,
                    _ => Value::Nil,
                })
            }
            Tok::P("{") => {
                self.bump();
                let items = self.value_list("}")?;
                Ok(Value::set(items))
            }
            Tok::P("(") => {
                self.bump();
                if self.eat_p(")") {
                    return Ok(Value::tuple([]));
                }
                let first = self.value()?;
                if self.eat_p(")") {
                    // a parenthesized literal
                    return Ok(first);
                }
                self.expect_p(",")?;
                let mut items = vec![first];
                items.extend(self.value_list(")")?);
                Ok(Value::Tuple(items))
            }
            _ => self.expected("a literal value"),
        }
    }

    /// Comma-separated values up to `close`; a trailing comma is allowed.
    fn value_list(&mut self, close: &str) -> PResult<Vec<Value>> {
        let mut items = Vec::new();
        loop {
            if self.eat_p(close) {
                return Ok(items);
            }
            items.push(self.value()?);
            if !self.eat_p(",") {
                self.expect_p(close)?;
                return Ok(items);
            }
        }
    }

    // ---- terms ----

    fn term(&mut self) -> PResult<Term> {
        let mut t = self.and_term()?;
        while self.eat_kw("or") {
            let r = self.and_term()?;
            t = Term::or(t, r);
        }
        Ok(t)
    }

    fn and_term(&mut self) -> PResult<Term> {
        let mut t = self.not_term()?;
        while self.eat_kw("and") {
            let r = self.not_term()?;
            t = Term::and(t, r);
        }
        Ok(t)
    }

    fn not_term(&mut self) -> PResult<Term> {
        if self.eat_kw("not") {
            return Ok(Term::not(self.not_term()?));
        }
        self.cmp_term()
    }

    fn cmp_term(&mut self) -> PResult<Term> {
        let l = self.add_term()?;
        let op = match self.peek() {
            Tok::P(p) if matches!(*p, "=" | "!=" | "<" | ">" | "<=" | ">=") => *p,
            _ => return Ok(l),
        };
        self.bump();
        let r = self.add_term()?;
        Ok(match op {
            "!=" => Term::not(Term::eq(l, r)),
            op => Term::app(op, vec![l, r]),
        })
    }

    fn add_term(&mut self) -> PResult<Term> {
        let mut t = self.mul_term()?;
        loop {
            let op = match self.peek() {
                Tok::P(p) if matches!(*p, "+" | "-") => *p,
                _ => return Ok(t),
            };
            self.bump();
            let r = self.mul_term()?;
            t = Term::app(op, vec![t, r]);
        }
    }

    fn mul_term(&mut self) -> PResult<Term> {
        let mut t = self.primary()?;
        loop {
            let op = match self.peek() {
                Tok::P(p) if matches!(*p, "*" | "/") => *p,
                _ => return Ok(t),
            };
            self.bump();
            let r = self.primary()?;
            t = Term::app(op, vec![t, r]);
        }
    }

    fn primary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Num(_) | Tok::Atom(_) | Tok::P("{") => Ok(Term::lit(self.value()?)),
            Tok::P("|") => {
                self.bump();
                let t = self.term()?;
                self.expect_p("|")?;
                Ok(Term::app("abs", vec![t]))
            }
            Tok::P("(") => {
                self.bump();
                if self.eat_p(")") {
                    return Ok(Term::lit(Value::tuple([])));
                }
                let first = self.term()?;
                if self.eat_p(")") {
                    return Ok(first);
                }
                if !self.is_p(",") {
                    return self.expected("`)` or `,`");
                }
                // a tuple literal
                let mut items = vec![first];
                while self.eat_p(",") {
                    if self.is_p(")") {
                        break;
                    }
                    items.push(self.term()?);
                }
                self.expect_p(")")?;
                let values = items.into_iter().map(literal_of).collect::<Option<Vec<_>>>();
                match values {
                    Some(vs) => Ok(Term::lit(Value::Tuple(vs))),
                    None => self.err("tuple elements must be literal values"),
                }
            }
            Tok::Ident(s) if s == "true" || s == "false" || s == "nil" => {
                self.bump();
                Ok(Term::constant(s))
            }
            Tok::Ident(_) => {
                let head = self.ident()?;
                let mut args = Vec::new();
                if self.eat_p("(") && !self.eat_p(")") {
                    loop {
                        args.push(self.term()?);
                        if self.eat_p(")") {
                            break;
                        }
                        self.expect_p(",")?;
                    }
                }
                Ok(Term::App(head, args))
            }
            _ => self.expected("a term"),
        }
    }

    // ---- rules ----

    fn rule(&mut self, path: &mut Vec<usize>) -> PResult<Rule> {
        self.spans.insert(Site::Rule(path.clone()), self.here());
        if self.eat_kw("skip") {
            return Ok(Rule::skip());
        }
        if self.eat_kw("par") {
            self.expect_p("{")?;
            let mut children = Vec::new();
            loop {
                if self.eat_p("}") {
                    break;
                }
                path.push(children.len());
                children.push(self.rule(path)?);
                path.pop();
                if !self.eat_p(";") {
                    self.expect_p("}")?;
                    break;
                }
            }
            return Ok(Rule::Par(children));
        }
        if self.eat_kw("if") {
            let guard = self.term()?;
            self.expect_kw("then")?;
            path.push(0);
            let then = self.rule(path)?;
            path.pop();
            let els = if self.eat_kw("else") {
                path.push(1);
                let r = self.rule(path)?;
                path.pop();
                r
            } else {
                Rule::skip()
            };
            return Ok(Rule::cond(guard, then, els));
        }
        let head = match self.peek() {
            Tok::Ident(s) if !super::KEYWORDS.contains(&s.as_str()) => self.ident()?,
            _ => return self.expected("a rule"),
        };
        let mut args = Vec::new();
        if self.eat_p("(") && !self.eat_p(")") {
            loop {
                args.push(self.term()?);
                if self.eat_p(")") {
                    break;
                }
                self.expect_p(",")?;
            }
        }
        self.expect_p(":=")?;
        let rhs = self.term()?;
        Ok(Rule::Assign { head, args, rhs })
    }

    // ---- module items ----

    fn seed(&mut self) -> PResult<Seed> {
        let symbol = self.ident()?;
        let mut args = Vec::new();
        if self.eat_p("(") {
            args = self.value_list(")")?;
        }
        self.expect_p("=")?;
        let value = self.value()?;
        Ok(Seed { symbol, args, value })
    }

    fn module(&mut self) -> PResult<Module> {
        self.spans.insert(Site::Module, self.here());
        self.expect_kw("module")?;
        let name = self.ident()?;
        let mut vocab = Vocabulary::obligatory();
        let mut bindings = IndexMap::new();
        let mut init = Vec::new();
        let mut inputs: Option<Vec<String>> = None;
        let mut output: Option<String> = None;
        let mut program: Option<Rule> = None;
        let mut declared = std::collections::HashSet::new();

        loop {
            let at = self.here();
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(kw) if matches!(kw.as_str(), "static" | "dynamic" | "external") => {
                    self.bump();
                    self.expect_kw("fn")?;
                    let sym_at = self.here();
                    let sname = self.symbol_name()?;
                    self.expect_p("/")?;
                    let arity = self.nat()?;
                    let relational = self.eat_kw("relational");
                    let kind = match kw.as_str() {
                        "dynamic" => {
                            self.expect_kw("default")?;
                            SymbolKind::Dynamic {
                                default: self.term()?,
                            }
                        }
                        "static" => SymbolKind::Static,
                        _ => SymbolKind::External,
                    };
                    if self.eat_p("=") {
                        let bind_at = self.here();
                        let binding = if self.eat_p("@") {
                            let target = self.symbol_name()?;
                            if kw == "external" {
                                Binding::Chooser(target)
                            } else {
                                Binding::Builtin(target)
                            }
                        } else {
                            Binding::Const(self.value()?)
                        };
                        self.spans.insert(Site::Binding(sname.clone()), bind_at);
                        bindings.insert(sname.clone(), binding);
                    }
                    if !declared.insert(sname.clone()) {
                        return Err(Diagnostic::error(
                            sym_at.0,
                            sym_at.1,
                            format!("`{sname}` is declared twice"),
                        ));
                    }
                    self.spans.insert(Site::Symbol(sname.clone()), sym_at);
                    let sym = Symbol {
                        name: sname,
                        arity,
                        relational,
                        kind,
                    };
                    if let Some(prev) = vocab.get(&sym.name) {
                        // obligatory redeclarations are checked by validation
                        if prev == &sym {
                            continue;
                        }
                    }
                    vocab.insert(sym);
                }
                Tok::Ident(kw) if kw == "init" => {
                    self.bump();
                    self.spans.insert(Site::Init(init.len()), self.here());
                    init.push(self.seed()?);
                }
                Tok::Ident(kw) if kw == "input" => {
                    self.bump();
                    self.spans.insert(Site::Io, at);
                    let list = inputs.get_or_insert_with(Vec::new);
                    list.push(self.ident()?);
                    while self.eat_p(",") {
                        list.push(self.ident()?);
                    }
                }
                Tok::Ident(kw) if kw == "output" => {
                    self.bump();
                    self.spans.insert(Site::Io, at);
                    if output.is_some() {
                        return self.err("only one output variable may be declared");
                    }
                    output = Some(self.ident()?);
                }
                Tok::Ident(kw) if kw == "program" => {
                    if program.is_some() {
                        return self.err("a module has exactly one program");
                    }
                    self.bump();
                    program = Some(self.rule(&mut Vec::new())?);
                }
                _ => return self.expected("a declaration, `init`, `input`, `output` or `program`"),
            }
        }
        let Some(program) = program else {
            return self.err("missing `program`");
        };
        let io = match (inputs, output) {
            (None, None) => None,
            (inputs, Some(output)) => Some(Io {
                inputs: inputs.unwrap_or_default(),
                output,
            }),
            (Some(_), None) => {
                let (l, c) = self.spans[&Site::Io];
                return Err(Diagnostic::error(
                    l,
                    c,
                    "inputs declared without an output variable",
                ));
            }
        };
        Ok(Module {
            name,
            vocab,
            bindings,
            init,
            program,
            io,
        })
    }
}

fn literal_of(t: Term) -> Option<Value> {
    match t {
        Term::Lit(v) => Some(v),
        Term::App(h, a) if a.is_empty() => match h.as_str() {
            "true" => Some(Value::TRUE),
            "false" => Some(Value::FALSE),
            "nil" => Some(Value::Nil),
            _ => None,
        },
        _ => None,
    }
}

/// Parses and validates a module. Diagnostics are positioned.
pub fn parse_module(text: &str) -> Result<Module, Vec<Diagnostic>> {
    let mut p = Parser::new(text).map_err(|d| vec![d])?;
    let m = p.module().map_err(|d| vec![d])?;
    let problems = validate::problems(&m);
    if problems.is_empty() {
        return Ok(m);
    }
    Err(problems
        .into_iter()
        .map(|(site, msg)| {
            let (l, c) = p.spans.get(&site).copied().unwrap_or((0, 0));
            Diagnostic::error(l, c, msg)
        })
        .collect())
}

fn whole<T>(text: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> Result<T, Diagnostic> {
    let mut p = Parser::new(text)?;
    let v = f(&mut p)?;
    if !matches!(p.peek(), Tok::Eof) {
        return p.expected("end of input");
    }
    Ok(v)
}

/// Parses a standalone term (unvalidated).
pub fn parse_term(text: &str) -> Result<Term, Diagnostic> {
    whole(text, |p| p.term())
}

pub fn parse_value(text: &str) -> Result<Value, Diagnostic> {
    whole(text, |p| p.value())
}

/// Comma-separated literal values, e.g. `3, (1, 2), 'a`.
pub fn parse_values(text: &str) -> Result<Vec<Value>, Diagnostic> {
    whole(text, |p| {
        let mut out = Vec::new();
        if matches!(p.peek(), Tok::Eof) {
            return Ok(out);
        }
        out.push(p.value()?);
        while p.eat_p(",") {
            out.push(p.value()?);
        }
        Ok(out)
    })
}

/// Comma-separated seeds, e.g. `f(0)=3, f(1)=6, x=nil`.
pub fn parse_seeds(text: &str) -> Result<Vec<Seed>, Diagnostic> {
    whole(text, |p| {
        let mut out = Vec::new();
        if matches!(p.peek(), Tok::Eof) {
            return Ok(out);
        }
        out.push(p.seed()?);
        while p.eat_p(",") {
            out.push(p.seed()?);
        }
        Ok(out)
    })
}
