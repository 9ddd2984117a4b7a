//! Infix expressions in one variable `t`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 't' | func '(' expr ')' | '(' expr ')'
//! func    := sqrt | log | exp | abs
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-t^2 = -(t^2)` and
//! `2^-t` is accepted. There is no implicit multiplication.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Log,
    Exp,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Abs => "abs",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sqrt => x.sqrt(),
            Func::Log => x.ln(),
            Func::Exp => x.exp(),
            Func::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Expr {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => t,
            Expr::Neg(e) => -e.eval(t),
            Expr::Add(l, r) => l.eval(t) + r.eval(t),
            Expr::Sub(l, r) => l.eval(t) - r.eval(t),
            Expr::Mul(l, r) => l.eval(t) * r.eval(t),
            Expr::Div(l, r) => l.eval(t) / r.eval(t),
            Expr::Pow(l, r) => pow(l.eval(t), r.eval(t)),
            Expr::Call(f, e) => f.apply(e.eval(t)),
        }
    }

    fn is_const(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_const(),
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) | Expr::Pow(l, r) => {
                l.is_const() && r.is_const()
            }
        }
    }

    /// Symbolic derivative with respect to `t`, lightly simplified.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        if self.is_const() {
            return Num(0.0);
        }
        match self {
            Num(_) => Num(0.0),
            Var => Num(1.0),
            Neg(e) => neg(e.derivative()),
            Add(l, r) => add(l.derivative(), r.derivative()),
            Sub(l, r) => sub(l.derivative(), r.derivative()),
            Mul(l, r) => add(mul(l.derivative(), (**r).clone()), mul((**l).clone(), r.derivative())),
            Div(l, r) if r.is_const() => div(l.derivative(), (**r).clone()),
            Div(l, r) => div(
                sub(mul(l.derivative(), (**r).clone()), mul((**l).clone(), r.derivative())),
                pow_e((**r).clone(), Num(2.0)),
            ),
            Pow(base, ex) if ex.is_const() => {
                // (u^c)' = c·u^(c−1)·u'
                let c = ex.eval(0.0);
                mul(mul(Num(c), pow_e((**base).clone(), Num(c - 1.0))), base.derivative())
            }
            Pow(base, ex) => {
                // (u^v)' = u^v·(v'·log u + v·u'/u)
                let log_term = mul(ex.derivative(), Call(Func::Log, base.clone()));
                let ratio = div(mul((**ex).clone(), base.derivative()), (**base).clone());
                mul(self.clone(), add(log_term, ratio))
            }
            Call(f, e) => {
                let inner = e.derivative();
                let outer = match f {
                    Func::Sqrt => div(Num(0.5), Call(Func::Sqrt, e.clone())),
                    Func::Log => div(Num(1.0), (**e).clone()),
                    Func::Exp => Call(Func::Exp, e.clone()),
                    Func::Abs => div((**e).clone(), Call(Func::Abs, e.clone())),
                };
                mul(outer, inner)
            }
        }
    }
}

fn num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(v) => Some(*v),
        _ => None,
    }
}

fn neg(e: Expr) -> Expr {
    match e {
        Expr::Num(v) => Expr::Num(-v),
        Expr::Neg(inner) => *inner,
        e => Expr::Neg(b(e)),
    }
}

fn add(l: Expr, r: Expr) -> Expr {
    match (num(&l), num(&r)) {
        (Some(x), Some(y)) => Expr::Num(x + y),
        (Some(0.0), _) => r,
        (_, Some(0.0)) => l,
        _ => Expr::Add(b(l), b(r)),
    }
}

fn sub(l: Expr, r: Expr) -> Expr {
    match (num(&l), num(&r)) {
        (Some(x), Some(y)) => Expr::Num(x - y),
        (Some(0.0), _) => neg(r),
        (_, Some(0.0)) => l,
        _ => Expr::Sub(b(l), b(r)),
    }
}

fn mul(l: Expr, r: Expr) -> Expr {
    match (num(&l), num(&r)) {
        (Some(x), Some(y)) => Expr::Num(x * y),
        (Some(0.0), _) | (_, Some(0.0)) => Expr::Num(0.0),
        (Some(1.0), _) => r,
        (_, Some(1.0)) => l,
        (Some(-1.0), _) => neg(r),
        (_, Some(-1.0)) => neg(l),
        _ => Expr::Mul(b(l), b(r)),
    }
}

fn div(l: Expr, r: Expr) -> Expr {
    match (num(&l), num(&r)) {
        (Some(x), Some(y)) if y != 0.0 => Expr::Num(x / y),
        (Some(0.0), _) => Expr::Num(0.0),
        (_, Some(1.0)) => l,
        _ => Expr::Div(b(l), b(r)),
    }
}

fn pow_e(base: Expr, ex: Expr) -> Expr {
    match num(&ex) {
        Some(0.0) => Expr::Num(1.0),
        Some(1.0) => base,
        _ => Expr::Pow(b(base), b(ex)),
    }
}

/// `powf` with integer exponents routed through `powi`, so negative bases work for them.
fn pow(x: f64, y: f64) -> f64 {
    if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
        x.powi(y as i32)
    } else {
        x.powf(y)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => f.write_str("t"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(l, r) => write!(f, "({l} + {r})"),
            Expr::Sub(l, r) => write!(f, "({l} - {r})"),
            Expr::Mul(l, r) => write!(f, "({l} * {r})"),
            Expr::Div(l, r) => write!(f, "({l} / {r})"),
            Expr::Pow(l, r) => write!(f, "({l} ^ {r})"),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {text:?} at {start}")))?;
            out.push((start, Token::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} at {i}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{op}' at {}", self.at())))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(b(lhs), b(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(b(lhs), b(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(b(lhs), b(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(b(lhs), b(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(b(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat('^') {
            return Ok(Expr::Pow(b(base), b(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.at();
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(Error::Parse(format!("unexpected end of expression at {at}")));
        };
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(Expr::Num(v)),
            Token::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Token::Ident(name) => {
                let func = match name.as_str() {
                    "t" => return Ok(Expr::Var),
                    "sqrt" => Func::Sqrt,
                    "log" => Func::Log,
                    "exp" => Func::Exp,
                    "abs" => Func::Abs,
                    other => return Err(Error::Parse(format!("unknown identifier {other:?} at {at}"))),
                };
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Call(func, b(arg)))
            }
            Token::Op(c) => Err(Error::Parse(format!("unexpected '{c}' at {at}"))),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0, len: src.chars().count() };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input at {}", p.at())));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, t: f64) -> f64 {
        parse_expr(s).unwrap().eval(t)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(ev("2 ^ 3 ^ 2", 0.0), 512.0);
        assert_eq!(ev("-t^2", 3.0), -9.0);
        assert_eq!(ev("(-t)^2", 3.0), 9.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(ev("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(ev("--t", 2.0), 2.0);
    }

    #[test]
    fn functions_and_literals() {
        assert_eq!(ev("sqrt(t)", 4.0), 2.0);
        assert_eq!(ev("t*log(t)", 1.0), 0.0);
        assert_eq!(ev("abs(t) + exp(0)", -2.0), 3.0);
        assert_eq!(ev("1.5e2 + 2E-1", 0.0), 150.2);
        assert_eq!(ev(".5", 0.0), 0.5);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "2 t", "t +", "(t", "t)", "foo(t)", "sqrt t", "1..2", "t # 2", "2e"] {
            assert!(parse_expr(s).is_err(), "{s:?} parsed");
        }
    }

    #[test]
    fn derivatives() {
        let cases: [(&str, fn(f64) -> f64); 6] = [
            ("t^3", |t| 3.0 * t * t),
            ("sqrt(t)", |t| 0.5 / t.sqrt()),
            ("t*log(t)", |t| t.ln() + 1.0),
            ("1/(1+t)", |t| -1.0 / (1.0 + t).powi(2)),
            ("t^t", |t| t.powf(t) * (t.ln() + 1.0)),
            ("exp(-t^2)", |t| -2.0 * t * (-t * t).exp()),
        ];
        for (s, d) in cases {
            let e = parse_expr(s).unwrap().derivative();
            for t in [0.3, 1.0, 2.5] {
                assert!((e.eval(t) - d(t)).abs() < 1e-12 * d(t).abs().max(1.0), "{s} at {t}");
            }
        }
    }

    #[test]
    fn display_reparses() {
        let e = parse_expr("-t^2 + 3/(t - 1)").unwrap();
        let again = parse_expr(&e.to_string()).unwrap();
        for t in [0.0, 2.0, 5.5] {
            assert_eq!(e.eval(t), again.eval(t));
        }
    }

    #[test]
    fn derivatives_are_simplified() {
        let d = |src: &str| parse_expr(src).unwrap().derivative().to_string();
        assert_eq!(d("3*t + 7"), "3");
        assert_eq!(d("t^2"), "(2 * t)");
        assert_eq!(d("exp(t)"), "exp(t)");
        assert_eq!(d("-t"), "-1");
        let e = parse_expr("t / (1 - 0.5*t)").unwrap();
        let dd = e.derivative().derivative();
        let again = parse_expr(&dd.to_string()).unwrap();
        for t in [-0.5f64, 0.0, 0.9] {
            let exact = 1.0 / (1.0 - 0.5 * t).powi(3);
            assert!((dd.eval(t) - exact).abs() < 1e-14);
            assert_eq!(again.eval(t), dd.eval(t));
        }
    }
}
