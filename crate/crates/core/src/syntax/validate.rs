use std::collections::HashSet;

use super::{is_identifier, Diagnostic, Module, Site, INFIX, KEYWORDS};
use crate::builtins::{self, Chooser};
use crate::term::{Rule, Term};
use crate::vocab::{Binding, Symbol, SymbolKind, Vocabulary};

/// Checks every well-formedness constraint on a module. An empty result
/// means the module can be executed without symbol or arity faults.
pub fn validate(m: &Module) -> Vec<Diagnostic> {
    problems(m)
        .into_iter()
        .map(|(_, msg)| Diagnostic::error(0, 0, msg))
        .collect()
}

pub(crate) fn problems(m: &Module) -> Vec<(Site, String)> {
    let mut v = Validator {
        vocab: &m.vocab,
        out: Vec::new(),
    };
    v.module(m);
    v.out
}

struct Validator<'a> {
    vocab: &'a Vocabulary,
    out: Vec<(Site, String)>,
}

impl Validator<'_> {
    fn report(&mut self, site: Site, msg: impl Into<String>) {
        self.out.push((site, msg.into()));
    }

    fn module(&mut self, m: &Module) {
        if !is_identifier(&m.name) || KEYWORDS.contains(&m.name.as_str()) {
            self.report(Site::Module, format!("invalid module name `{}`", m.name));
        }
        let obligatory = Vocabulary::obligatory();
        for name in obligatory.names() {
            if !m.vocab.contains(name) {
                self.report(Site::Module, format!("obligatory symbol `{name}` is missing"));
            }
        }
        for sym in m.vocab.iter() {
            self.symbol(sym, &obligatory, m);
        }
        for name in m.bindings.keys() {
            if !m.vocab.contains(name) {
                self.report(
                    Site::Binding(name.clone()),
                    format!("binding for undeclared symbol `{name}`"),
                );
            }
        }
        self.init(m);
        if let Some(io) = &m.io {
            for name in io.inputs.iter().chain(std::iter::once(&io.output)) {
                match m.vocab.get(name) {
                    Some(s) if s.is_dynamic() && s.arity == 0 => {}
                    Some(_) => self.report(
                        Site::Io,
                        format!("io variable `{name}` must be a nullary dynamic symbol"),
                    ),
                    None => self.report(Site::Io, format!("io variable `{name}` is not declared")),
                }
            }
        }
        self.rule(&m.program, &mut Vec::new());
    }

    fn symbol(&mut self, sym: &Symbol, obligatory: &Vocabulary, m: &Module) {
        let site = Site::Symbol(sym.name.clone());
        if let Some(o) = obligatory.get(&sym.name) {
            if o != sym {
                self.report(
                    site.clone(),
                    format!(
                        "`{}` is obligatory (static {}, arity {}) and cannot be redeclared differently",
                        o.name,
                        if o.relational { "relational" } else { "function" },
                        o.arity
                    ),
                );
            }
            if m.bindings.contains_key(&sym.name) {
                self.report(site, format!("obligatory `{}` cannot be rebound", sym.name));
            }
            return;
        }
        let name_ok = if INFIX.contains(&sym.name.as_str()) {
            if !(sym.is_static() && sym.arity == 2) {
                self.report(
                    site.clone(),
                    format!("operator `{}` must be a binary static symbol", sym.name),
                );
            }
            true
        } else {
            is_identifier(&sym.name) && !KEYWORDS.contains(&sym.name.as_str())
        };
        if !name_ok {
            self.report(site.clone(), format!("invalid symbol name `{}`", sym.name));
        }
        let binding = m.bindings.get(&sym.name);
        match &sym.kind {
            SymbolKind::Dynamic { default } => {
                if binding.is_some() {
                    self.report(site.clone(), format!("dynamic `{}` cannot be bound", sym.name));
                }
                let before = self.out.len();
                self.term(default, &site);
                if self.out.len() == before {
                    if !self.vocab.is_static_term(default) {
                        self.report(
                            site.clone(),
                            format!(
                                "default term of `{}` must be a static term (a dynamic symbol is assigned a static term as default)",
                                sym.name
                            ),
                        );
                    }
                    if sym.relational && !self.vocab.is_relational_term(default) {
                        self.report(
                            site,
                            format!(
                                "default term of relational `{}` must have a relational head",
                                sym.name
                            ),
                        );
                    }
                }
            }
            SymbolKind::Static => match binding {
                None => match builtins::lookup_static(&sym.name) {
                    Some(b) if b.arity == sym.arity && (b.relational || !sym.relational) => {}
                    Some(_) => self.report(
                        site,
                        format!("`{}` does not match the builtin of that name", sym.name),
                    ),
                    None => self.report(
                        site,
                        format!(
                            "static `{}` needs a binding (`= value` or `= @builtin`)",
                            sym.name
                        ),
                    ),
                },
                Some(Binding::Builtin(target)) => match builtins::lookup_static(target) {
                    Some(b) if b.arity != sym.arity => self.report(
                        Site::Binding(sym.name.clone()),
                        format!(
                            "builtin `{target}` has arity {}, `{}` has {}",
                            b.arity, sym.name, sym.arity
                        ),
                    ),
                    Some(b) if sym.relational && !b.relational => self.report(
                        Site::Binding(sym.name.clone()),
                        format!("relational `{}` bound to non-relational `{target}`", sym.name),
                    ),
                    Some(_) => {}
                    None => self.report(
                        Site::Binding(sym.name.clone()),
                        format!("unknown builtin `{target}`"),
                    ),
                },
                Some(Binding::Const(v)) => {
                    if sym.arity != 0 {
                        self.report(
                            Site::Binding(sym.name.clone()),
                            format!("only nullary `{}` can be bound to a value", sym.name),
                        );
                    }
                    if sym.relational && !v.is_bool() {
                        self.report(
                            Site::Binding(sym.name.clone()),
                            format!("relational `{}` bound to non-boolean {v}", sym.name),
                        );
                    }
                }
                Some(Binding::Chooser(_)) => self.report(
                    Site::Binding(sym.name.clone()),
                    format!("static `{}` cannot use an external chooser", sym.name),
                ),
            },
            SymbolKind::External => match binding {
                None => {}
                Some(Binding::Chooser(c)) if Chooser::lookup(c).is_some() => {}
                Some(Binding::Chooser(c)) => {
                    self.report(Site::Binding(sym.name.clone()), format!("unknown chooser `{c}`"))
                }
                Some(_) => self.report(
                    Site::Binding(sym.name.clone()),
                    format!("external `{}` must be bound to a chooser", sym.name),
                ),
            },
        }
    }

    fn init(&mut self, m: &Module) {
        let mut seen = HashSet::new();
        for (i, seed) in m.init.iter().enumerate() {
            let site = Site::Init(i);
            match m.vocab.get(&seed.symbol) {
                None => self.report(site, format!("unknown symbol `{}`", seed.symbol)),
                Some(s) if !s.is_dynamic() => self.report(
                    site,
                    format!("init may only seed dynamic symbols; `{}` is not dynamic", s.name),
                ),
                Some(s) if s.arity != seed.args.len() => self.report(
                    site,
                    format!(
                        "`{}` expects {} argument(s), got {}",
                        s.name,
                        s.arity,
                        seed.args.len()
                    ),
                ),
                Some(s) if s.relational && !seed.value.is_bool() => self.report(
                    site,
                    format!("relational `{}` seeded with non-boolean {}", s.name, seed.value),
                ),
                Some(_) => {
                    if !seen.insert(seed.location()) {
                        self.report(site, format!("location {} seeded twice", seed.location()));
                    }
                }
            }
        }
    }

    fn term(&mut self, t: &Term, site: &Site) {
        let Term::App(head, args) = t else { return };
        match self.vocab.get(head) {
            None => self.report(site.clone(), format!("unknown symbol `{head}`")),
            Some(s) if s.arity != args.len() => self.report(
                site.clone(),
                format!("`{head}` expects {} argument(s), got {}", s.arity, args.len()),
            ),
            Some(_) => {}
        }
        for a in args {
            self.term(a, site);
        }
    }

    fn rule(&mut self, r: &Rule, path: &mut Vec<usize>) {
        let site = Site::Rule(path.clone());
        match r {
            Rule::Assign { head, args, rhs } => {
                match self.vocab.get(head) {
                    None => self.report(site.clone(), format!("unknown symbol `{head}`")),
                    Some(s) if !s.is_dynamic() => {
                        self.report(site.clone(), format!("assignment head `{head}` must be dynamic"))
                    }
                    Some(s) if s.arity != args.len() => self.report(
                        site.clone(),
                        format!("`{head}` expects {} argument(s), got {}", s.arity, args.len()),
                    ),
                    Some(s) => {
                        if s.relational && !self.vocab.is_relational_term(rhs) {
                            self.report(
                                site.clone(),
                                format!(
                                    "`{head}` is relational, so the head function of the right-hand side must be relational"
                                ),
                            );
                        }
                    }
                }
                for a in args {
                    self.term(a, &site);
                }
                self.term(rhs, &site);
            }
            Rule::If { guard, then, els } => {
                let before = self.out.len();
                self.term(guard, &site);
                if self.out.len() == before && !self.vocab.is_relational_term(guard) {
                    self.report(site, "guard must have a relational head");
                }
                path.push(0);
                self.rule(then, path);
                path.pop();
                path.push(1);
                self.rule(els, path);
                path.pop();
            }
            Rule::Par(children) => {
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    self.rule(c, path);
                    path.pop();
                }
            }
        }
    }
}
