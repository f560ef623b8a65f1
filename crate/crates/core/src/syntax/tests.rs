use super::*;
use crate::corpus;

fn errors(src: &str) -> Vec<Diagnostic> {
    parse_module(src).expect_err("expected diagnostics")
}

const HEAD: &str = "module t\ndynamic fn x/0 default 0\n";

#[test]
fn corpus_round_trips_through_printer() {
    for (name, src) in corpus::ALL {
        let m = parse_module(src).unwrap();
        let printed = print_module(&m);
        let again = parse_module(&printed).unwrap_or_else(|d| panic!("{name}: {d:?}\n{printed}"));
        assert_eq!(m, again, "{name}");
    }
}

#[test]
fn sort_has_four_assignments() {
    assert_eq!(corpus::sort().program.assignment_count(), 4);
}

#[test]
fn empty_par_is_skip() {
    let m = parse_module(&format!("{HEAD}program par {{ }}")).unwrap();
    assert!(m.program.is_skip());
    assert_eq!(print_rule(&m.program), "skip");
}

#[test]
fn relational_head_needs_relational_rhs() {
    let d = errors("module t\ndynamic fn p/0 relational default false\nprogram p := 0");
    assert_eq!((d[0].line, d[0].col), (3, 9));
    assert!(d[0]
        .message
        .contains("head function of the right-hand side must be relational"));
}

#[test]
fn default_term_must_be_static() {
    let d = errors("module t\ndynamic fn f/1 default nil\ndynamic fn h/0 default f(0)\nprogram skip");
    assert_eq!(d.len(), 1);
    assert!(d[0].message.contains("assigned a static term"));
    assert_eq!(d[0].line, 3);
}

#[test]
fn obligatory_clash() {
    let d = errors("module t\nstatic fn true/1 relational\nprogram skip");
    assert!(d[0].message.contains("obligatory"), "{d:?}");
    // an identical redeclaration is harmless
    parse_module("module t\nstatic fn true/0 relational\nprogram skip").unwrap();
}

#[test]
fn syntax_errors_are_positioned() {
    let d = errors("module t\nprogram\n  x := ");
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].line, 3);
    let d = errors("module t\nprogram if x then");
    assert_eq!(d[0].line, 2);
    assert!(errors("").len() == 1);
    assert!(errors("module t\nprogram skip\nprogram skip").len() == 1);
}

#[test]
fn diagnostics_render_with_file_name() {
    let d = errors("module t\nprogram\n  y := 1");
    assert_eq!(d[0].render("a.asm"), "a.asm:3:3: error: unknown symbol `y`");
}

#[test]
fn validation_catches_kind_and_arity_faults() {
    let cases = [
        "static fn c/0 = 1\nprogram c := 1",
        "program x(1) := 1",
        "program if x then skip",
        "static fn q/0 relational = 1\nprogram skip",
        "static fn q/1 = 3\nprogram skip",
        "static fn q/1 = @nosuch\nprogram skip",
        "static fn q/1 = @Merge\nprogram skip",
        "external fn e/1 = @nosuch\nprogram skip",
        "static fn e/0 = @choose\nprogram skip",
        "init x = 1\ninit x = 2\nprogram skip",
        "static fn c/0 = 1\ninit c = 1\nprogram skip",
        "dynamic fn p/1 relational default false\ninit p(1) = 3\nprogram skip",
        "output c\nprogram skip",
        "static fn unknownthing/1\nprogram skip",
    ];
    for c in cases {
        let src = format!("{HEAD}{c}");
        assert!(parse_module(&src).is_err(), "accepted:\n{src}");
    }
}

#[test]
fn validate_on_built_module() {
    let mut m = corpus::karger();
    assert!(validate(&m).is_empty());
    m.program = crate::term::Rule::assign("Nope", vec![], crate::term::Term::nat(1));
    assert_eq!(validate(&m).len(), 1);
}

#[test]
fn term_printing_respects_precedence() {
    for src in [
        "a - (b - c)",
        "(a - b) - c",
        "a * (b + c)",
        "not (a = b)",
        "a != b",
        "not not p",
        "(a or b) and c",
        "a or b and c",
        "|x - 1| < 2",
        "f(1/3, -2, 'a, {1, 2}, (1, 2), (1,), ())",
        "(a < b) = true",
    ] {
        let t = parse_term(src).unwrap();
        let back = parse_term(&print_term(&t)).unwrap();
        assert_eq!(t, back, "{src} printed as {}", print_term(&t));
    }
    assert_eq!(print_term(&parse_term("a - (b - c)").unwrap()), "a - (b - c)");
    assert_eq!(print_term(&parse_term("(a - b) - c").unwrap()), "a - b - c");
}

#[test]
fn dangling_else_survives_printing() {
    let src = format!("{HEAD}program if x = 0 then if x = 1 then x := 2 else skip else x := 3");
    let m = parse_module(&src).unwrap();
    let again = parse_module(&print_module(&m)).unwrap();
    assert_eq!(m, again);
}

#[test]
fn seeds_and_values() {
    let s = parse_seeds("f(0)=3, x = {'a, ('b, 1/2)}").unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(s[0].to_string(), "f(0) = 3");
    assert_eq!(parse_value("-7/14").unwrap(), crate::value::Value::ratio(-1, 2));
    assert!(parse_value("1/0").is_err());
    assert_eq!(parse_values("").unwrap(), vec![]);
}
