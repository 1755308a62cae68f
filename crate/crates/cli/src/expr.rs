//! Element expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' nat | "'")*
//! atom   := ident | 'S' | 'ind' | 'Lam' | 'u'<k> | 'e[' word ']'
//!         | int ('/' posint)? | 'i' | 'sqrt(' nat ')' | '(' expr ')'
//! ```
//!
//! `S'` is the adjoint of `S`; a postfix `'` applies to the whole factor, so
//! `S^2'` is `S*²`. Identifiers name functions from the system file.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crossed_shift::crossed::CrossedElement;
use crossed_shift::cylfun::{CylFun, QuasiBasis};
use crossed_shift::scalar::RadScalar;
use crossed_shift::sft::{TransitionMatrix, Word};

/// Names that cannot be used for system functions.
pub const RESERVED: &[&str] = &["S", "ind", "Lam", "i", "sqrt", "e"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at column {}: {msg}", .pos + 1)]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    /// `int` or `int/posint`, as written.
    Num(String),
    /// `sqrt(n)`, as written.
    Sqrt(String),
    Cyl(Word),
    Plus,
    Minus,
    Star,
    Caret,
    Prime,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> ExprError {
    ExprError { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = src.chars().enumerate().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> String {
        let mut s = String::new();
        while *i < chars.len() && chars[*i].1.is_ascii_digit() {
            s.push(chars[*i].1);
            *i += 1;
        }
        s
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '\'' => Some(Tok::Prime),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((pos, t));
            i += 1;
        } else if c.is_ascii_digit() {
            let mut lit = digits(&mut i);
            if i < chars.len() && chars[i].1 == '/' {
                i += 1;
                let d = digits(&mut i);
                if d.is_empty() {
                    return Err(err(i, "expected a denominator after `/`"));
                }
                if d.bytes().all(|b| b == b'0') {
                    return Err(err(pos, "zero denominator"));
                }
                lit = format!("{lit}/{d}");
            }
            out.push((pos, Tok::Num(lit)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                name.push(chars[i].1);
                i += 1;
            }
            let next = chars.get(i).map(|p| p.1);
            if name == "sqrt" {
                if next != Some('(') {
                    return Err(err(pos, "expected `sqrt(n)`"));
                }
                i += 1;
                let d = digits(&mut i);
                if d.is_empty() || chars.get(i).map(|p| p.1) != Some(')') {
                    return Err(err(pos, "malformed scalar: expected `sqrt(n)` with a natural number n"));
                }
                i += 1;
                out.push((pos, Tok::Sqrt(format!("sqrt({d})"))));
            } else if name == "e" && next == Some('[') {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].1 != ']' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(err(pos, "unterminated `e[`"));
                }
                let text: String = chars[start..i].iter().map(|p| p.1).collect();
                i += 1;
                let w = if text.is_empty() || text == "ε" { Some(Word::empty()) } else { Word::parse_digits(&text) };
                out.push((pos, Tok::Cyl(w.ok_or_else(|| err(pos, format!("bad word `{text}`")))?)));
            } else {
                out.push((pos, Tok::Ident(name)));
            }
        } else {
            return Err(err(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Resolves identifiers against a system.
pub struct Env<'a> {
    matrix: Arc<TransitionMatrix>,
    functions: &'a BTreeMap<String, CylFun>,
    basis: QuasiBasis,
}

impl<'a> Env<'a> {
    pub fn new(matrix: &Arc<TransitionMatrix>, functions: &'a BTreeMap<String, CylFun>) -> Self {
        Env { matrix: matrix.clone(), functions, basis: QuasiBasis::new(matrix) }
    }

    pub fn parse(&self, src: &str) -> Result<CrossedElement, ExprError> {
        let toks = lex(src)?;
        let mut p = Parser { env: self, toks, i: 0, end: src.chars().count() };
        let x = p.expr()?;
        if let Some((pos, t)) = p.toks.get(p.i) {
            return Err(err(*pos, format!("unexpected {}", describe(t))));
        }
        Ok(x)
    }

    fn ident(&self, pos: usize, name: &str) -> Result<CrossedElement, ExprError> {
        let a = &self.matrix;
        let fun = match name {
            "S" => return Ok(CrossedElement::s(a)),
            "i" => return Ok(CrossedElement::scalar(a, RadScalar::i())),
            "ind" => self.basis.index(),
            "Lam" => self.basis.lambda().clone(),
            _ => {
                if let Some(k) =
                    name.strip_prefix('u').filter(|k| !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()))
                {
                    let k: usize = k.parse().map_err(|_| err(pos, format!("bad index in `{name}`")))?;
                    let u = self.basis.u();
                    u.get(k)
                        .cloned()
                        .ok_or_else(|| err(pos, format!("`{name}`: the quasi-basis has {} elements", u.len())))?
                } else {
                    self.functions.get(name).cloned().ok_or_else(|| err(pos, format!("unknown identifier `{name}`")))?
                }
            }
        };
        Ok(CrossedElement::from_fun(&fun))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Num(..) | Tok::Sqrt(_) => "number".into(),
        Tok::Cyl(w) => format!("`e[{w}]`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Prime => "`'`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

struct Parser<'e, 'a> {
    env: &'e Env<'a>,
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|p| &p.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |p| p.0)
    }

    fn expr(&mut self) -> Result<CrossedElement, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CrossedElement, ExprError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.i += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<CrossedElement, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            return Ok(self.unary()?.neg());
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<CrossedElement, ExprError> {
        let mut x = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Caret) => {
                    self.i += 1;
                    let pos = self.pos();
                    match self.peek() {
                        Some(Tok::Num(k)) if !k.contains('/') => {
                            let k: u32 = k.parse().map_err(|_| err(pos, "exponent too large"))?;
                            self.i += 1;
                            x = x.pow(k);
                        }
                        _ => return Err(err(pos, "expected a natural-number exponent")),
                    }
                }
                Some(Tok::Prime) => {
                    self.i += 1;
                    x = x.adjoint();
                }
                _ => return Ok(x),
            }
        }
    }

    fn atom(&mut self) -> Result<CrossedElement, ExprError> {
        let pos = self.pos();
        let a = self.env.matrix.clone();
        let tok = self.toks.get(self.i).map(|p| p.1.clone());
        self.i += 1;
        match tok {
            None => Err(err(pos, "unexpected end of expression")),
            Some(Tok::Ident(name)) => self.env.ident(pos, &name),
            Some(Tok::Num(lit) | Tok::Sqrt(lit)) => {
                let c: RadScalar = lit.parse().map_err(|e| err(pos, format!("malformed scalar: {e}")))?;
                Ok(CrossedElement::scalar(&a, c))
            }
            Some(Tok::Cyl(w)) => {
                let f = CylFun::indicator(&a, &w).map_err(|e| err(pos, e.to_string()))?;
                Ok(CrossedElement::from_fun(&f))
            }
            Some(Tok::LParen) => {
                let x = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.pos(), "expected `)`"));
                }
                self.i += 1;
                Ok(x)
            }
            Some(t) => Err(err(pos, format!("unexpected {}", describe(&t)))),
        }
    }
}

/// Prints a function as `(c)*e[w] + ...`, re-parsable by [`Env::parse`].
pub fn print_fun(f: &CylFun) -> String {
    if f.is_zero() {
        return "0".into();
    }
    if f.depth() == 0 {
        return format!("({})", f.value(&Word::empty()));
    }
    let parts: Vec<String> = f.entries().map(|(w, c)| format!("({c})*e[{w}]")).collect();
    parts.join(" + ")
}

/// Prints an element as a sum of `(f)*S^n*S'^m*(g)` terms, re-parsable by
/// [`Env::parse`].
pub fn print_element(x: &CrossedElement) -> String {
    let x = x.collect_terms();
    let mut terms = Vec::new();
    for t in x.terms() {
        if t.is_zero() {
            continue;
        }
        let mut pieces = Vec::new();
        let one = CylFun::one(x.matrix());
        if t.a != one || (t.n == 0 && t.m == 0 && t.b == one) {
            pieces.push(format!("({})", print_fun(&t.a)));
        }
        match t.n {
            0 => {}
            1 => pieces.push("S".into()),
            n => pieces.push(format!("S^{n}")),
        }
        match t.m {
            0 => {}
            1 => pieces.push("S'".into()),
            m => pieces.push(format!("S^{m}'")),
        }
        if t.b != one {
            pieces.push(format!("({})", print_fun(&t.b)));
        }
        terms.push(pieces.join("*"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
