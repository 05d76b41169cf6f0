//! Expression language for polynomials, forms and polyvectors.
//!
//! ```text
//! sum     := wedge (('+' | '-') wedge)*
//! wedge   := product ('^^' product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)?
//! atom    := INT | 'i' | 't' | zK | zbK | dzK | dzbK | @K | @bK | '(' sum ')'
//! ```
//!
//! A value is a polynomial in `t` whose coefficients are all forms or all
//! polyvectors; a scalar (degree 0 everywhere) combines with either.

use std::fmt::{self, Write as _};

use genkahler::coeffring::{RealField, Scalar};
use genkahler::tensorcalc::exterior::{slots, Mask};
use genkahler::{Form, GaussRat, PolyScalar, Polyvector, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Highest power of `t` a value may carry.
pub const MAX_T_DEGREE: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown identifier `{name}`")]
    UnknownIdent { line: usize, col: usize, name: String },
    #[error("{0}")]
    Eval(String),
}

type PResult<T> = std::result::Result<T, ExprError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    At { conj: bool, index: usize },
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> PResult<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut out = Vec::new();
    let mut k = 0;
    let err = |line, col, msg: String| ExprError::Syntax { line, col, msg };
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        let start = k;
        let tok = if c.is_ascii_digit() {
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            Tok::Int(s.parse().map_err(|_| err(l0, c0, format!("bad integer `{s}`")))?)
        } else if c.is_ascii_alphabetic() || c == '_' {
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            Tok::Ident(chars[start..k].iter().collect())
        } else if c == '@' {
            k += 1;
            let conj = chars.get(k) == Some(&'b');
            if conj {
                k += 1;
            }
            let d0 = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[d0..k].iter().collect();
            let index = s.parse::<usize>().map_err(|_| err(l0, c0, "expected index after `@`".into()))?;
            Tok::At { conj, index }
        } else {
            k += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' if chars.get(k) == Some(&'^') => {
                    k += 1;
                    Tok::Wedge
                }
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
            }
        };
        col += k - start;
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

/// Parse tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    I,
    T,
    /// `z_k` (`conj = false`) or `zb_k`, 1-based.
    Var { conj: bool, index: usize },
    Diff { conj: bool, index: usize },
    Vector { conj: bool, index: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Wedge(Box<Expr>, Box<Expr>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn indexed(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = self.peek();
        Err(ExprError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn sum(&mut self) -> PResult<Expr> {
        let mut lhs = self.wedge()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.wedge()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.wedge()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn wedge(&mut self) -> PResult<Expr> {
        let mut lhs = self.product()?;
        while self.peek().tok == Tok::Wedge {
            self.bump();
            lhs = Expr::Wedge(Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().tok.clone() {
            Tok::Int(k) => {
                let e = u32::try_from(&k).ok().filter(|&e| e <= 64);
                match e {
                    Some(e) => {
                        self.bump();
                        Ok(Expr::Pow(Box::new(base), e))
                    }
                    None => self.syntax("exponent out of range"),
                }
            }
            _ => self.syntax("expected a non-negative integer exponent"),
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::At { conj, index } if index > 0 => Ok(Expr::Vector { conj, index }),
            Tok::At { .. } => Err(ExprError::Syntax { line: t.line, col: t.col, msg: "indices start at 1".into() }),
            Tok::LParen => {
                let e = self.sum()?;
                if self.peek().tok != Tok::RParen {
                    return self.syntax("expected `)`");
                }
                self.bump();
                Ok(e)
            }
            Tok::Ident(name) => {
                let e = match name.as_str() {
                    "i" => Some(Expr::I),
                    "t" => Some(Expr::T),
                    _ => None,
                }
                .or_else(|| indexed(&name, "zb").map(|index| Expr::Var { conj: true, index }))
                .or_else(|| indexed(&name, "z").map(|index| Expr::Var { conj: false, index }))
                .or_else(|| indexed(&name, "dzb").map(|index| Expr::Diff { conj: true, index }))
                .or_else(|| indexed(&name, "dz").map(|index| Expr::Diff { conj: false, index }));
                e.ok_or(ExprError::UnknownIdent { line: t.line, col: t.col, name })
            }
            Tok::End => Err(ExprError::Syntax { line: t.line, col: t.col, msg: "unexpected end of input".into() }),
            other => Err(ExprError::Syntax { line: t.line, col: t.col, msg: format!("unexpected token {other:?}") }),
        }
    }
}

pub fn parse_expr(src: &str) -> PResult<Expr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.sum()?;
    if p.peek().tok != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Scalar,
    Form,
    Vector,
}

/// `Σ_k t^k · series[k]`; polyvector coefficients are stored under form masks.
#[derive(Debug, Clone, PartialEq)]
pub struct Value {
    kind: ValueKind,
    series: Vec<Form>,
}

fn eval_err<T>(msg: impl Into<String>) -> PResult<T> {
    Err(ExprError::Eval(msg.into()))
}

fn core_err(e: genkahler::Error) -> ExprError {
    ExprError::Eval(e.to_string())
}

fn mask_kind(n: usize, series: &[Form]) -> bool {
    series.iter().all(|f| f.terms().all(|(m, _)| *m == 0)) || n == 0
}

impl Value {
    fn new(n: usize, kind: ValueKind, mut series: Vec<Form>) -> Self {
        while series.len() > 1 && series.last().is_some_and(|f| f.is_zero()) {
            series.pop();
        }
        if series.is_empty() {
            series.push(Form::zero(n));
        }
        let kind = if mask_kind(n, &series) { ValueKind::Scalar } else { kind };
        Value { kind, series }
    }

    pub fn scalar(n: usize, f: PolyScalar) -> Self {
        Value::new(n, ValueKind::Scalar, vec![Form::scalar(n, f)])
    }

    pub fn from_form(f: &Form) -> Self {
        Value::new(f.n(), ValueKind::Form, vec![f.clone()])
    }

    pub fn from_polyvector(v: &Polyvector) -> Self {
        let f = Form::from_terms(v.n(), v.terms().map(|(m, c)| (*m, c.clone())));
        Value::new(v.n(), ValueKind::Vector, vec![f])
    }

    pub fn from_form_series(series: &[Form]) -> Self {
        let n = series.first().map_or(0, |f| f.n());
        Value::new(n, ValueKind::Form, series.to_vec())
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.series[0].n()
    }

    pub fn t_degree(&self) -> usize {
        self.series.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.series.iter().all(|f| f.is_zero())
    }

    fn t_free(&self, what: &str) -> PResult<&Form> {
        if self.series.len() > 1 {
            return eval_err(format!("{what} may not depend on t"));
        }
        Ok(&self.series[0])
    }

    pub fn to_form(&self) -> PResult<Form> {
        if self.kind == ValueKind::Vector {
            return eval_err("expected a form, found a polyvector");
        }
        self.t_free("a form").cloned()
    }

    pub fn to_polyvector(&self) -> PResult<Polyvector> {
        if self.kind == ValueKind::Form {
            return eval_err("expected a polyvector, found a form");
        }
        let f = self.t_free("a polyvector")?;
        Ok(Polyvector::from_terms(f.n(), f.terms().map(|(m, c)| (*m, c.clone()))))
    }

    pub fn to_poly(&self) -> PResult<PolyScalar> {
        if self.kind != ValueKind::Scalar {
            return eval_err("expected a function");
        }
        Ok(self.t_free("a function")?.coeff(0))
    }

    /// Coefficients of `t^0, t^1, ...` as forms.
    pub fn form_series(&self) -> PResult<Vec<Form>> {
        if self.kind == ValueKind::Vector {
            return eval_err("expected a form, found a polyvector");
        }
        Ok(self.series.clone())
    }

    /// Exact rational constant, if the value is one.
    pub fn to_rational(&self) -> Option<Rational> {
        let f = self.series.first()?;
        if self.series.len() > 1 || self.kind != ValueKind::Scalar {
            return None;
        }
        let p = f.coeff(0);
        if !p.is_constant() {
            return None;
        }
        let c = p.constant_term();
        c.is_real().then(|| c.re())
    }

    fn join(&self, other: &Value) -> PResult<ValueKind> {
        use ValueKind::*;
        match (self.kind, other.kind) {
            (Scalar, k) | (k, Scalar) => Ok(k),
            (a, b) if a == b => Ok(a),
            _ => eval_err("cannot combine a form with a polyvector"),
        }
    }

    fn zip(&self, other: &Value, f: impl Fn(Form, Form) -> Form) -> PResult<Value> {
        let kind = self.join(other)?;
        let n = self.n();
        let len = self.series.len().max(other.series.len());
        let zero = Form::zero(n);
        let series = (0..len)
            .map(|k| f(self.series.get(k).unwrap_or(&zero).clone(), other.series.get(k).unwrap_or(&zero).clone()))
            .collect();
        Ok(Value::new(n, kind, series))
    }

    fn convolve(&self, other: &Value) -> PResult<Value> {
        let kind = self.join(other)?;
        let n = self.n();
        let len = self.series.len() + other.series.len() - 1;
        if len - 1 > MAX_T_DEGREE {
            return eval_err(format!("power of t exceeds {MAX_T_DEGREE}"));
        }
        let mut series = vec![Form::zero(n); len];
        for (a, x) in self.series.iter().enumerate() {
            for (b, y) in other.series.iter().enumerate() {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                series[a + b] = series[a + b].clone() + x.try_wedge(y).map_err(core_err)?;
            }
        }
        Ok(Value::new(n, kind, series))
    }

    fn scale(&self, c: &GaussRat) -> Value {
        Value::new(self.n(), self.kind, self.series.iter().map(|f| f.scale(c)).collect())
    }
}

/// Evaluate on `C^n`.
pub fn eval(e: &Expr, n: usize) -> PResult<Value> {
    let check = |index: usize| {
        if index == 0 || index > n {
            eval_err(format!("index {index} out of range 1..={n}"))
        } else {
            Ok(index - 1)
        }
    };
    let konst = |c: GaussRat| Value::scalar(n, PolyScalar::constant(c));
    Ok(match e {
        Expr::Int(v) => konst(GaussRat::from_real(Rational::from_integer(v.clone()))),
        Expr::I => konst(GaussRat::imag_unit()),
        Expr::T => Value::new(n, ValueKind::Scalar, vec![Form::zero(n), Form::scalar(n, PolyScalar::one())]),
        Expr::Var { conj, index } => {
            let j = check(*index)?;
            Value::scalar(n, PolyScalar::var(if *conj { n + j } else { j }))
        }
        Expr::Diff { conj, index } => {
            let j = check(*index)?;
            Value::from_form(&if *conj { Form::dzb(n, j) } else { Form::dz(n, j) })
        }
        Expr::Vector { conj, index } => {
            let j = check(*index)?;
            Value::from_polyvector(&if *conj { Polyvector::d_zb(n, j) } else { Polyvector::d_z(n, j) })
        }
        Expr::Neg(a) => eval(a, n)?.scale(&-GaussRat::one()),
        Expr::Add(a, b) => eval(a, n)?.zip(&eval(b, n)?, |x, y| x + y)?,
        Expr::Sub(a, b) => eval(a, n)?.zip(&eval(b, n)?, |x, y| x - y)?,
        Expr::Mul(a, b) => {
            let (x, y) = (eval(a, n)?, eval(b, n)?);
            if x.kind != ValueKind::Scalar && y.kind != ValueKind::Scalar {
                return eval_err("`*` needs a scalar factor; use `^^` to wedge");
            }
            x.convolve(&y)?
        }
        Expr::Div(a, b) => {
            let x = eval(a, n)?;
            let q = eval(b, n)?.to_rational();
            match q {
                Some(q) if !q.is_zero() => x.scale(&GaussRat::from_real(q).inv()),
                Some(_) => return eval_err("division by zero"),
                None => return eval_err("`/` takes a rational constant divisor"),
            }
        }
        Expr::Pow(a, k) => {
            let x = eval(a, n)?;
            if x.kind != ValueKind::Scalar {
                return eval_err("only functions can be raised to a power");
            }
            let mut acc = konst(GaussRat::one());
            for _ in 0..*k {
                acc = acc.convolve(&x)?;
            }
            acc
        }
        Expr::Wedge(a, b) => eval(a, n)?.convolve(&eval(b, n)?)?,
    })
}

pub fn parse_value(src: &str, n: usize) -> PResult<Value> {
    eval(&parse_expr(src)?, n)
}

fn fmt_rat(q: &Rational) -> String {
    let (num, den) = q.to_frac_strings();
    if den == "1" {
        num
    } else {
        format!("{num}/{den}")
    }
}

fn slot_name(n: usize, v: usize) -> String {
    if v < n {
        format!("z{}", v + 1)
    } else {
        format!("zb{}", v - n + 1)
    }
}

/// Factors of a basis monomial and coefficient monomial, without the number.
fn factors(n: usize, kind: ValueKind, mono: &[u8], mask: Mask) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (v, &e) in mono.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(slot_name(n, v)),
            e => parts.push(format!("{}^{e}", slot_name(n, v))),
        }
    }
    let basis: Vec<String> = slots(mask)
        .map(|s| {
            let (bar, j) = if s < n { ("", s + 1) } else { ("b", s - n + 1) };
            match kind {
                ValueKind::Vector => format!("@{bar}{j}"),
                _ => format!("dz{bar}{j}"),
            }
        })
        .collect();
    let mut s = parts.join("*");
    if !basis.is_empty() {
        if !s.is_empty() {
            s.push('*');
        }
        s.push_str(&basis.join("^^"));
    }
    s
}

/// `(negative, text)` for one term; `text` has no leading sign.
fn fmt_term(c: &GaussRat, rest: &str) -> (bool, String) {
    let (re, im) = (c.re(), c.im());
    let (neg, head) = if im.is_zero() {
        let a = re.abs();
        (re.is_negative(), if a.is_one() && !rest.is_empty() { String::new() } else { fmt_rat(&a) })
    } else if re.is_zero() {
        let a = im.abs();
        (im.is_negative(), if a.is_one() { "i".to_string() } else { format!("{}*i", fmt_rat(&a)) })
    } else {
        let sign = if im.is_negative() { '-' } else { '+' };
        (false, format!("({} {sign} {}*i)", fmt_rat(&re), fmt_rat(&im.abs())))
    };
    let text = match (head.is_empty(), rest.is_empty()) {
        (true, _) => rest.to_string(),
        (false, true) => head,
        (false, false) => format!("{head}*{rest}"),
    };
    (neg, text)
}

fn fmt_coefficient(f: &Form, kind: ValueKind, out: &mut String) {
    let n = f.n();
    let mut first = true;
    for (mask, poly) in f.terms() {
        for (mono, c) in poly.terms() {
            let (neg, text) = fmt_term(c, &factors(n, kind, mono, *mask));
            match (first, neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&text);
            first = false;
        }
    }
    if first {
        out.push('0');
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (k, coef) in self.series.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            if !first {
                out.push_str(" + ");
            }
            first = false;
            match k {
                0 => fmt_coefficient(coef, self.kind, &mut out),
                _ => {
                    if k == 1 {
                        out.push_str("t*(");
                    } else {
                        write!(out, "t^{k}*(")?;
                    }
                    fmt_coefficient(coef, self.kind, &mut out);
                    out.push(')');
                }
            }
        }
        if first {
            out.push('0');
        }
        f.write_str(&out)
    }
}

pub fn print_form(f: &Form) -> String {
    Value::from_form(f).to_string()
}

pub fn print_polyvector(v: &Polyvector) -> String {
    Value::from_polyvector(v).to_string()
}

pub fn print_poly(n: usize, p: &PolyScalar) -> String {
    Value::scalar(n, p.clone()).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> GaussRat {
        GaussRat::from_frac(a, b)
    }

    #[test]
    fn spec_examples() {
        let v = parse_value("z1*@1^^@2", 2).unwrap();
        let want = Polyvector::slot(2, 0, PolyScalar::var(0)).wedge(&Polyvector::d_z(2, 1));
        assert_eq!(v.to_polyvector().unwrap(), want);
        let w = parse_value("i/2*(dz1^^dzb1 + dz2^^dzb2)", 2).unwrap();
        assert_eq!(w.to_form().unwrap(), Form::standard_kahler(2));
        let m = parse_value("z1^2*dz1^^dz2 + (1/3)*dzb1", 2).unwrap().to_form().unwrap();
        assert_eq!(m.degrees(), vec![1, 2]);
        assert_eq!(m.coeff(1 << 2), PolyScalar::constant(q(1, 3)));
    }

    #[test]
    fn precedence() {
        let a = parse_value("2*z1^2", 1).unwrap();
        let b = parse_value("2*(z1^2)", 1).unwrap();
        assert_eq!(a, b);
        let c = parse_value("-z1^2 + z1*z1", 1).unwrap();
        assert!(c.is_zero());
        let d = parse_value("dz1^^dz2 + dz2^^dz1", 2).unwrap();
        assert!(d.is_zero());
        let e = parse_value("z1*dz1^^z2*dz2", 2).unwrap();
        assert_eq!(e, parse_value("z1*z2*dz1^^dz2", 2).unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("z1 + w2"), Err(ExprError::UnknownIdent { line: 1, col: 6, .. })));
        assert!(matches!(parse_expr("z1 +\n  * z2"), Err(ExprError::Syntax { line: 2, col: 3, .. })));
        assert!(matches!(parse_expr("(z1"), Err(ExprError::Syntax { .. })));
        assert!(parse_value("z3", 2).is_err());
        assert!(parse_value("z1/z2", 2).is_err());
        assert!(parse_value("z1/0", 2).is_err());
        assert!(parse_value("dz1*dz2", 2).is_err());
        assert!(parse_value("dz1 + @1", 2).is_err());
        assert!(parse_value("dz1^2", 2).is_err());
    }

    #[test]
    fn t_series() {
        let v = parse_value("(1 + t)^2*dz1", 1).unwrap();
        assert_eq!(v.t_degree(), 2);
        assert!(v.to_form().is_err());
        assert_eq!(v.to_string(), "dz1 + t*(2*dz1) + t^2*(dz1)");
    }

    #[test]
    fn printing() {
        let cases = [
            ("i/2*(dz1^^dzb1 + dz2^^dzb2)", 2, "1/2*i*dz1^^dzb1 + 1/2*i*dz2^^dzb2"),
            ("-z1*@1^^@2", 2, "-z1*@1^^@2"),
            ("(1 - 2*i)*zb1^3 - 1/3", 1, "-1/3 + (1 - 2*i)*zb1^3"),
            ("0*dz1", 1, "0"),
            ("-i*z1", 1, "-i*z1"),
        ];
        for (src, n, want) in cases {
            let v = parse_value(src, n).unwrap();
            assert_eq!(v.to_string(), want, "{src}");
            assert_eq!(parse_value(want, n).unwrap(), v);
        }
    }
}
