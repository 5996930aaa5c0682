//! Analytic-expression language used to declare metrics, maps and fields.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := factor (("*" | "/") factor)*
//! factor   := "-" factor | power
//! power    := atom ("^" exponent)?
//! exponent := ("-" | "+") exponent | atom ("^" exponent)?      (folded to a constant p/q)
//! atom     := number | ident | func "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. Exponents must
//! fold to a constant rational; write `exp(g*log(f))` for general powers.

use std::fmt;
use std::sync::Arc;

use crate::jet::{DepthExceeded, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Option<Ratio> {
        if den == 0 {
            return None;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        let s = if den < 0 { -1 } else { 1 };
        Some(Ratio { num: s * num / g, den: s * den / g })
    }

    pub fn int(n: i64) -> Ratio {
        Ratio { num: n, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn from_i128(num: i128, den: i128) -> Option<Ratio> {
        let g = gcd128(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        let (n, d) = (num / g, den / g);
        Ratio::new(i64::try_from(n).ok()?, i64::try_from(d).ok()?)
    }

    fn add(self, o: Ratio) -> Option<Ratio> {
        let n = self.num as i128 * o.den as i128 + o.num as i128 * self.den as i128;
        Ratio::from_i128(n, self.den as i128 * o.den as i128)
    }

    fn mul(self, o: Ratio) -> Option<Ratio> {
        Ratio::from_i128(self.num as i128 * o.num as i128, self.den as i128 * o.den as i128)
    }

    fn recip(self) -> Option<Ratio> {
        Ratio::new(self.den, self.num)
    }

    fn powi(self, e: i64) -> Option<Ratio> {
        if e.unsigned_abs() > 64 {
            return None;
        }
        let base = if e < 0 { self.recip()? } else { self };
        let mut acc = Ratio::int(1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(base)?;
        }
        Some(acc)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gcd128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd128(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Index into the declaring chart's coordinate list.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Ratio),
    Call(Func, Box<Expr>),
}

// ---------------------------------------------------------------- errors

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: found {found}, expected one of {}", .expected.join(" "))]
    Syntax {
        line: usize,
        col: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("unknown identifier `{name}` at {line}:{col}")]
    UnknownIdent { name: String, line: usize, col: usize },
    #[error("non-constant exponent at {line}:{col}: exponents must be constant rationals")]
    NonConstantExponent { line: usize, col: usize },
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("{kind} in `{subexpr}`")]
    Domain { kind: &'static str, subexpr: String },
    #[error("non-finite value in `{subexpr}`")]
    NonFinite { subexpr: String },
    #[error(transparent)]
    Depth(#[from] DepthExceeded),
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    And,
    Or,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::End => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::EqEq => "==",
            Tok::Ne => "!=",
            Tok::And => "&&",
            Tok::Or => "||",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok, n: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned { tok, line: l0, col: c0 });
            *i += n;
            *col += n;
        };
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '-' | '\u{2212}' => push(Tok::Minus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '/' => push(Tok::Slash, 1, &mut i, &mut col),
            '^' => push(Tok::Caret, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '<' if next == Some('=') => push(Tok::Le, 2, &mut i, &mut col),
            '<' => push(Tok::Lt, 1, &mut i, &mut col),
            '>' if next == Some('=') => push(Tok::Ge, 2, &mut i, &mut col),
            '>' => push(Tok::Gt, 1, &mut i, &mut col),
            '=' if next == Some('=') => push(Tok::EqEq, 2, &mut i, &mut col),
            '!' if next == Some('=') => push(Tok::Ne, 2, &mut i, &mut col),
            '&' if next == Some('&') => push(Tok::And, 2, &mut i, &mut col),
            '|' if next == Some('|') => push(Tok::Or, 2, &mut i, &mut col),
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                    j += 1;
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let text: String = chars[start..j].iter().collect();
                let v: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    line: l0,
                    col: c0,
                    found: format!("malformed number `{text}`"),
                    expected: vec!["number".into()],
                })?;
                if !v.is_finite() {
                    return Err(ParseError::Syntax {
                        line: l0,
                        col: c0,
                        found: format!("non-finite number `{text}`"),
                        expected: vec!["finite number".into()],
                    });
                }
                push(Tok::Num(v), j - start, &mut i, &mut col);
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let text: String = chars[start..j].iter().collect();
                push(Tok::Ident(text), j - start, &mut i, &mut col);
            }
            other => {
                return Err(ParseError::Syntax {
                    line: l0,
                    col: c0,
                    found: format!("character `{other}`"),
                    expected: vec!["expression".into()],
                })
            }
        }
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

// ---------------------------------------------------------------- parser

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    names: &'a [String],
}

const PRIMARY: &[&str] = &["number", "identifier", "(", "-"];

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Spanned {
        let s = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        s
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(&[t.symbol()])
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (line, col) = self.here();
        let e = self.exponent()?;
        match fold_ratio(&e) {
            Some(r) => Ok(Expr::Pow(Box::new(base), r)),
            None => Err(ParseError::NonConstantExponent { line, col }),
        }
    }

    fn exponent(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.exponent()?)))
            }
            Tok::Plus => {
                self.bump();
                self.exponent()
            }
            _ => {
                let base = self.atom()?;
                if *self.peek() == Tok::Caret {
                    self.bump();
                    let (line, col) = self.here();
                    let e = self.exponent()?;
                    let r = fold_ratio(&e).ok_or(ParseError::NonConstantExponent { line, col })?;
                    Ok(Expr::Pow(Box::new(base), r))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail(&[")", "+", "-", "*", "/", "^"]);
                }
                self.bump();
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(f) = Func::from_name(&name) {
                    self.expect(Tok::LParen)?;
                    let arg = self.expr()?;
                    if *self.peek() != Tok::RParen {
                        return self.fail(&[")", "+", "-", "*", "/", "^"]);
                    }
                    self.bump();
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None => Err(ParseError::UnknownIdent { name, line, col }),
                }
            }
            _ => self.fail(PRIMARY),
        }
    }
}

/// Folds a constant expression to an exact rational, if it is one.
fn fold_ratio(e: &Expr) -> Option<Ratio> {
    match e {
        Expr::Num(v) => {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                Some(Ratio::int(*v as i64))
            } else {
                None
            }
        }
        Expr::Neg(a) => fold_ratio(a).and_then(|r| r.mul(Ratio::int(-1))),
        Expr::Add(a, b) => fold_ratio(a)?.add(fold_ratio(b)?),
        Expr::Sub(a, b) => fold_ratio(a)?.add(fold_ratio(b)?.mul(Ratio::int(-1))?),
        Expr::Mul(a, b) => fold_ratio(a)?.mul(fold_ratio(b)?),
        Expr::Div(a, b) => fold_ratio(a)?.mul(fold_ratio(b)?.recip()?),
        Expr::Pow(a, r) if r.den == 1 => fold_ratio(a)?.powi(r.num),
        _ => None,
    }
}

pub fn parse_expression(src: &str, names: &[String]) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, names };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["+", "-", "*", "/", "^", "end of input"]);
    }
    Ok(e)
}

// ---------------------------------------------------------------- printing

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(v) if *v < 0.0 || v.is_sign_negative() => 3,
        _ => 5,
    }
}

impl Expr {
    /// Renders with the minimal parentheses that reparse to the same tree.
    pub fn render(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.write(names, &mut s);
        s
    }

    fn child(&self, names: &[String], min: u8, out: &mut String) {
        if prec(self) < min {
            out.push('(');
            self.write(names, out);
            out.push(')');
        } else {
            self.write(names, out);
        }
    }

    fn write(&self, names: &[String], out: &mut String) {
        match self {
            Expr::Num(v) => {
                if v.is_sign_negative() {
                    out.push_str(&format!("-{:?}", -v));
                } else {
                    out.push_str(&format!("{v:?}"));
                }
            }
            Expr::Var(i) => match names.get(*i) {
                Some(n) => out.push_str(n),
                None => out.push_str(&format!("_{i}")),
            },
            Expr::Neg(a) => {
                out.push('-');
                a.child(names, 3, out);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.child(names, 1, out);
                out.push_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " });
                b.child(names, 2, out);
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.child(names, 2, out);
                out.push_str(if matches!(self, Expr::Mul(..)) { " * " } else { " / " });
                b.child(names, 3, out);
            }
            Expr::Pow(a, r) => {
                a.child(names, 5, out);
                if r.den == 1 {
                    out.push_str(&format!("^{}", r.num));
                } else {
                    out.push_str(&format!("^({}/{})", r.num, r.den));
                }
            }
            Expr::Call(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write(names, out);
                out.push(')');
            }
        }
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 0.0)
    }

    // ------------------------------------------------------------ evaluation

    /// Evaluates at a jet point. `names` is only used to render errors.
    pub fn eval<S: Real>(&self, x: &[S], names: &[String]) -> Result<S, EvalError> {
        let v = match self {
            Expr::Num(c) => return Ok(S::cst(*c)),
            Expr::Var(i) => return Ok(x[*i]),
            Expr::Neg(a) => -a.eval(x, names)?,
            Expr::Add(a, b) => a.eval(x, names)? + b.eval(x, names)?,
            Expr::Sub(a, b) => a.eval(x, names)? - b.eval(x, names)?,
            Expr::Mul(a, b) => a.eval(x, names)? * b.eval(x, names)?,
            Expr::Div(a, b) => {
                let d = b.eval(x, names)?;
                if d.val() == 0.0 {
                    return Err(self.domain("division by zero", names));
                }
                a.eval(x, names)? / d
            }
            Expr::Pow(a, r) => {
                let b = a.eval(x, names)?;
                if b.val() == 0.0 && r.num < 0 {
                    return Err(self.domain("zero raised to a negative power", names));
                }
                if r.den == 1 {
                    b.powi(r.num as i32)
                } else {
                    if b.val() < 0.0 {
                        return Err(self.domain("fractional power of a negative number", names));
                    }
                    b.powf(r.to_f64())
                }
            }
            Expr::Call(f, a) => {
                let u = a.eval(x, names)?;
                match f {
                    Func::Exp => u.exp(),
                    Func::Log => {
                        if u.val() <= 0.0 {
                            return Err(self.domain("log of a non-positive number", names));
                        }
                        u.ln()
                    }
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Sqrt => {
                        if u.val() < 0.0 {
                            return Err(self.domain("sqrt of a negative number", names));
                        }
                        u.sqrt()
                    }
                }
            }
        };
        if !v.all_finite() {
            return Err(EvalError::NonFinite { subexpr: self.render(names) });
        }
        Ok(v)
    }

    fn domain(&self, kind: &'static str, names: &[String]) -> EvalError {
        EvalError::Domain { kind, subexpr: self.render(names) }
    }
}

// ---------------------------------------------------------------- predicates

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

/// Boolean domain predicate: comparisons joined by `&&` and `||`.
#[derive(Clone, Debug, PartialEq)]
pub enum Pred {
    Cmp(Expr, CmpOp, Expr),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
}

impl Pred {
    pub fn holds(&self, x: &[f64], names: &[String]) -> Result<bool, EvalError> {
        Ok(match self {
            Pred::Cmp(a, op, b) => {
                let (u, v) = (a.eval(x, names)?, b.eval(x, names)?);
                match op {
                    CmpOp::Lt => u < v,
                    CmpOp::Le => u <= v,
                    CmpOp::Gt => u > v,
                    CmpOp::Ge => u >= v,
                    CmpOp::Eq => u == v,
                    CmpOp::Ne => u != v,
                }
            }
            Pred::And(a, b) => a.holds(x, names)? && b.holds(x, names)?,
            Pred::Or(a, b) => a.holds(x, names)? || b.holds(x, names)?,
        })
    }

    pub fn render(&self, names: &[String]) -> String {
        match self {
            Pred::Cmp(a, op, b) => {
                let s = match op {
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Gt => ">",
                    CmpOp::Ge => ">=",
                    CmpOp::Eq => "==",
                    CmpOp::Ne => "!=",
                };
                format!("{} {} {}", a.render(names), s, b.render(names))
            }
            Pred::And(a, b) => format!("{} && {}", a.render(names), b.render(names)),
            Pred::Or(a, b) => format!("{} || {}", a.render(names), b.render(names)),
        }
    }
}

pub fn parse_predicate(src: &str, names: &[String]) -> Result<Pred, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, names };
    let pred = pred_or(&mut p)?;
    if *p.peek() != Tok::End {
        return p.fail(&["&&", "||", "end of input"]);
    }
    Ok(pred)
}

fn pred_or(p: &mut Parser) -> Result<Pred, ParseError> {
    let mut lhs = pred_and(p)?;
    while *p.peek() == Tok::Or {
        p.bump();
        lhs = Pred::Or(Box::new(lhs), Box::new(pred_and(p)?));
    }
    Ok(lhs)
}

fn pred_and(p: &mut Parser) -> Result<Pred, ParseError> {
    let mut lhs = pred_cmp(p)?;
    while *p.peek() == Tok::And {
        p.bump();
        lhs = Pred::And(Box::new(lhs), Box::new(pred_cmp(p)?));
    }
    Ok(lhs)
}

fn pred_cmp(p: &mut Parser) -> Result<Pred, ParseError> {
    let a = p.expr()?;
    let op = match p.peek() {
        Tok::Lt => CmpOp::Lt,
        Tok::Le => CmpOp::Le,
        Tok::Gt => CmpOp::Gt,
        Tok::Ge => CmpOp::Ge,
        Tok::EqEq => CmpOp::Eq,
        Tok::Ne => CmpOp::Ne,
        _ => return p.fail(&["<", "<=", ">", ">=", "==", "!="]),
    };
    p.bump();
    let b = p.expr()?;
    Ok(Pred::Cmp(a, op, b))
}

// ---------------------------------------------------------------- scalar fields

/// An expression bound to the coordinate names of its chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarFieldExpr {
    pub ast: Expr,
    pub coords: Arc<[String]>,
}

impl ScalarFieldExpr {
    pub fn parse(src: &str, coords: &[&str]) -> Result<Self, ParseError> {
        let names: Arc<[String]> = coords.iter().map(|s| s.to_string()).collect();
        Self::parse_in(src, &names)
    }

    pub fn parse_in(src: &str, coords: &Arc<[String]>) -> Result<Self, ParseError> {
        Ok(ScalarFieldExpr { ast: parse_expression(src, coords)?, coords: coords.clone() })
    }

    pub fn constant(c: f64, coords: &Arc<[String]>) -> Self {
        ScalarFieldExpr { ast: Expr::Num(c), coords: coords.clone() }
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn eval<S: Real>(&self, x: &[S]) -> Result<S, EvalError> {
        self.ast.eval(x, &self.coords)
    }
}

impl fmt::Display for ScalarFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ast.render(&self.coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{Dual, D2};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(src: &str) -> Expr {
        parse_expression(src, &names(&["x1", "x2", "x3"])).unwrap()
    }

    #[test]
    fn grammar_forced_shapes() {
        assert_eq!(
            p("exp(-2*x2)"),
            Expr::Call(
                Func::Exp,
                Box::new(Expr::Mul(
                    Box::new(Expr::Neg(Box::new(Expr::Num(2.0)))),
                    Box::new(Expr::Var(1))
                ))
            )
        );
        assert_eq!(p("x3^-2"), Expr::Pow(Box::new(Expr::Var(2)), Ratio::int(-2)));
        assert_eq!(p("4"), Expr::Num(4.0));
    }

    #[test]
    fn power_binds_tighter_than_negation() {
        assert_eq!(p("-x1^2"), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var(0)), Ratio::int(2)))));
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(p("x1^2^3"), Expr::Pow(Box::new(Expr::Var(0)), Ratio::int(8)));
        assert_eq!(p("x1^(1/2)"), Expr::Pow(Box::new(Expr::Var(0)), Ratio::new(1, 2).unwrap()));
        assert_eq!(p("x1^(-3/6)"), Expr::Pow(Box::new(Expr::Var(0)), Ratio::new(-1, 2).unwrap()));
    }

    #[test]
    fn errors_are_positioned() {
        let n = names(&["x"]);
        match parse_expression("x +\n  * 2", &n) {
            Err(ParseError::Syntax { line, col, expected, .. }) => {
                assert_eq!((line, col), (2, 3));
                assert!(expected.contains(&"number".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_expression("y + 1", &n),
            Err(ParseError::UnknownIdent { col: 1, .. })
        ));
        assert!(matches!(
            parse_expression("x^x", &n),
            Err(ParseError::NonConstantExponent { .. })
        ));
        assert!(matches!(
            parse_expression("x^2.5", &n),
            Err(ParseError::NonConstantExponent { .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let n = names(&["x1", "x2", "x3"]);
        let f = p("exp(-2*x2)");
        let x = [Dual::new(0.0, 0.0), Dual::new(0.0, 1.0), Dual::new(0.0, 0.0)];
        let v = f.eval(&x, &n).unwrap();
        assert_eq!((v.re, v.du), (1.0, -2.0));
        let g = p("x3^-2");
        let x = [Dual::new(0.0, 0.0), Dual::new(0.0, 0.0), Dual::new(2.0, 1.0)];
        let v = g.eval(&x, &n).unwrap();
        assert_eq!((v.re, v.du), (0.25, -0.25));
        let x: [D2; 3] = [
            Dual::constant(Dual::constant(0.0)),
            Dual::new(Dual::new(0.0, 1.0), Dual::new(1.0, 0.0)),
            Dual::constant(Dual::constant(0.0)),
        ];
        assert_eq!(f.eval(&x, &n).unwrap().du.du, 4.0);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let n = names(&["x1", "x2", "x3"]);
        match p("1 + log(x1 - 1)").eval(&[0.5, 0.0, 0.0], &n) {
            Err(EvalError::Domain { subexpr, .. }) => assert_eq!(subexpr, "log(x1 - 1.0)"),
            other => panic!("{other:?}"),
        }
        assert!(p("sqrt(x1)").eval(&[-1.0, 0.0, 0.0], &n).is_err());
        assert!(p("1/x2").eval(&[1.0, 0.0, 0.0], &n).is_err());
        assert!(p("x3^-1").eval(&[1.0, 1.0, 0.0], &n).is_err());
        assert!(p("x3^(1/2)").eval(&[1.0, 1.0, -4.0], &n).is_err());
        assert_eq!(p("x3^3").eval(&[0.0, 0.0, -2.0], &n).unwrap(), -8.0);
    }

    #[test]
    fn printer_round_trips() {
        for s in [
            "exp(-2*x2)",
            "x3^-2",
            "a - (b - c)",
            "-(x1 * x2)",
            "(-x1)^2",
            "(x1^2)^3",
            "x1 / (x2 * x3)",
            "1e-7 + 2.5e10 * x1",
            "--x1 - -x2",
            "x1^(1/3) * sqrt(x2)",
        ] {
            let n = names(&["x1", "x2", "x3", "a", "b", "c"]);
            let e = parse_expression(s, &n).unwrap();
            let back = parse_expression(&e.render(&n), &n).unwrap();
            assert_eq!(e, back, "{s}");
        }
    }

    #[test]
    fn predicates() {
        let n = names(&["x1", "x2"]);
        let q = parse_predicate("x1 != 0 && x2 > 1 || x1 < -5", &n).unwrap();
        assert!(q.holds(&[1.0, 2.0], &n).unwrap());
        assert!(!q.holds(&[0.0, 2.0], &n).unwrap());
        assert!(q.holds(&[-6.0, 0.0], &n).unwrap());
        assert!(parse_predicate("x1", &n).is_err());
    }
}
