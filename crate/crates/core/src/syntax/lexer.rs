use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Diagnostic, KEYWORDS};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Num(BigRational),
    Atom(String),
    /// Punctuation and operators.
    P(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCT: &[&str] = &[
    ":=", "!=", "<=", ">=", "(", ")", "{", "}", ",", ";", "=", "<", ">", "+", "-", "*", "/", "|", "@",
];

/// Whether a token can end an operand, so that a following `-` is binary.
fn ends_operand(t: &Tok) -> bool {
    match t {
        Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()) || matches!(s.as_str(), "true" | "false" | "nil"),
        Tok::Num(_) | Tok::Atom(_) => true,
        Tok::P(p) => matches!(*p, ")" | "}"),
        Tok::Eof => false,
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let digits = |start: usize| {
        let mut j = start;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        j
    };

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tl, tc) = (line, col);
        let start = i;
        let prev_operand = out.last().is_some_and(|t| ends_operand(&t.tok));
        let negative = c == '-' && !prev_operand && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        let tok = if c.is_ascii_digit() || negative {
            let num_start = if negative { i + 1 } else { i };
            let mut end = digits(num_start);
            let numer: BigInt = chars[num_start..end].iter().collect::<String>().parse().unwrap();
            let mut value = BigRational::from_integer(numer);
            if end + 1 < chars.len() && chars[end] == '/' && chars[end + 1].is_ascii_digit() {
                let dend = digits(end + 1);
                let denom: BigInt = chars[end + 1..dend].iter().collect::<String>().parse().unwrap();
                if denom == BigInt::from(0) {
                    return Err(Diagnostic::error(tl, tc, "zero denominator in number literal"));
                }
                value /= BigRational::from_integer(denom);
                end = dend;
            }
            if negative {
                value = -value;
            }
            i = end;
            Tok::Num(value)
        } else if is_ident_start(c) {
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c == '\'' {
            i += 1;
            if !chars.get(i).copied().is_some_and(is_ident_start) {
                return Err(Diagnostic::error(tl, tc, "expected a name after `'`"));
            }
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            Tok::Atom(chars[start + 1..i].iter().collect())
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) else {
                return Err(Diagnostic::error(tl, tc, format!("unexpected character `{c}`")));
            };
            i += p.len();
            Tok::P(p)
        };
        col += i - start;
        out.push(Token {
            tok,
            line: tl,
            col: tc,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
