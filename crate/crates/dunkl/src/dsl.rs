//! A small expression language for multipliers and test functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | name | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Names: `r` (Euclidean norm), `x1`…`x9` (coordinates, `xi1`… accepted as
//! aliases), `i`, `pi`, `e`. Functions: exp, log, sqrt, abs, sin, cos, tanh,
//! sign, and bump (a C^∞ cutoff equal to 1 on [0, 1] and 0 beyond 2, applied
//! to |u|). Evaluation is complex throughout.

use std::fmt;

use num_complex::Complex64;

use crate::dunkl_core::ScalarField;
use crate::error::{DunklError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    R,
    /// Zero-based coordinate index.
    X(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Abs,
    Sin,
    Cos,
    Tanh,
    Sign,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tanh" => Func::Tanh,
            "sign" => Func::Sign,
            _ => return None,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tanh => "tanh",
            Func::Sign => "sign",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Complex64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
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
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| DunklError::Parse { pos: start, msg: format!("bad number '{text}'") })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Name(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(DunklError::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
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
            Err(DunklError::Parse { pos: self.here(), msg: format!("expected '{op}'") })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(v))) => {
                self.pos += 1;
                Ok(Expr::Num(Complex64::new(v, 0.0)))
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some((_, Tok::Name(name))) => {
                self.pos += 1;
                if name == "bump" {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(expand_bump(arg));
                }
                if let Some(f) = Func::from_name(&name) {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                name_to_expr(&name).ok_or(DunklError::Parse { pos: at, msg: format!("unknown name '{name}'") })
            }
            Some((_, Tok::Op(c))) => Err(DunklError::Parse { pos: at, msg: format!("unexpected '{c}'") }),
            None => Err(DunklError::Parse { pos: at, msg: "unexpected end of input".into() }),
        }
    }
}

fn name_to_expr(name: &str) -> Option<Expr> {
    match name {
        "r" => return Some(Expr::Var(Var::R)),
        "i" => return Some(Expr::Num(Complex64::new(0.0, 1.0))),
        "pi" => return Some(Expr::Num(Complex64::new(std::f64::consts::PI, 0.0))),
        "e" => return Some(Expr::Num(Complex64::new(std::f64::consts::E, 0.0))),
        _ => {}
    }
    let digits = name.strip_prefix("xi").or_else(|| name.strip_prefix('x'))?;
    let k: usize = digits.parse().ok()?;
    (k >= 1).then_some(Expr::Var(Var::X(k - 1)))
}

/// Parses an expression; errors carry the character offset.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.chars().count() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(DunklError::Parse { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(e)
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn pow(z: Complex64, w: Complex64) -> Complex64 {
    if w.im == 0.0 && w.re.fract() == 0.0 && w.re.abs() <= 64.0 {
        return z.powi(w.re as i32);
    }
    if z == c(0.0) {
        return if w.re > 0.0 {
            c(0.0)
        } else if w.re == 0.0 {
            c(1.0)
        } else {
            c(f64::INFINITY)
        };
    }
    if z.im == 0.0 && z.re > 0.0 && w.im == 0.0 {
        return c(z.re.powf(w.re));
    }
    z.powc(w)
}

impl Expr {
    /// Largest coordinate index used, plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(Var::R) => 0,
            Expr::Var(Var::X(k)) => k + 1,
            Expr::Neg(a) | Expr::Call(_, a) => a.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.arity().max(b.arity())
            }
        }
    }

    fn uses(&self, pred: &dyn Fn(&Var) -> bool) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => pred(v),
            Expr::Neg(a) | Expr::Call(_, a) => a.uses(pred),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.uses(pred) || b.uses(pred)
            }
        }
    }

    /// Depends on the point only through r.
    pub fn is_radial(&self) -> bool {
        !self.uses(&|v| matches!(v, Var::X(_)))
    }

    pub fn is_constant(&self) -> bool {
        !self.uses(&|_| true)
    }

    /// Evaluates with r = |x|.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.eval_with(r, x)
    }

    /// Evaluates a radial expression at radius r.
    pub fn eval_radial(&self, r: f64) -> Complex64 {
        self.eval_with(r, &[])
    }

    fn eval_with(&self, r: f64, x: &[f64]) -> Complex64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::R) => c(r),
            Expr::Var(Var::X(k)) => c(x.get(*k).copied().unwrap_or(f64::NAN)),
            Expr::Neg(a) => -a.eval_with(r, x),
            Expr::Add(a, b) => a.eval_with(r, x) + b.eval_with(r, x),
            Expr::Sub(a, b) => a.eval_with(r, x) - b.eval_with(r, x),
            Expr::Mul(a, b) => a.eval_with(r, x) * b.eval_with(r, x),
            Expr::Div(a, b) => a.eval_with(r, x) / b.eval_with(r, x),
            Expr::Pow(a, b) => pow(a.eval_with(r, x), b.eval_with(r, x)),
            Expr::Call(f, a) => {
                let z = a.eval_with(r, x);
                match f {
                    Func::Exp => z.exp(),
                    Func::Log => z.ln(),
                    Func::Sqrt => z.sqrt(),
                    Func::Abs => c(z.norm()),
                    Func::Sin => z.sin(),
                    Func::Cos => z.cos(),
                    Func::Tanh => z.tanh(),
                    Func::Sign => c(if z.re > 0.0 {
                        1.0
                    } else if z.re < 0.0 {
                        -1.0
                    } else {
                        0.0
                    }),
                }
            }
        }
    }

    /// Symbolic derivative. With respect to x_k, r counts as |x| (∂r/∂x_k = x_k/r);
    /// with respect to r, coordinates are held fixed.
    pub fn diff(&self, v: Var) -> Expr {
        use Expr::*;
        let b = Box::new;
        match self {
            Num(_) => zero(),
            Var(w) if *w == v => one(),
            Var(crate::dsl::Var::R) => match v {
                crate::dsl::Var::X(k) => div(Var(crate::dsl::Var::X(k)), Var(crate::dsl::Var::R)),
                crate::dsl::Var::R => one(),
            },
            Var(_) => zero(),
            Neg(a) => neg(a.diff(v)),
            Add(a, c2) => add(a.diff(v), c2.diff(v)),
            Sub(a, c2) => sub(a.diff(v), c2.diff(v)),
            Mul(a, c2) => add(mul(a.diff(v), (**c2).clone()), mul((**a).clone(), c2.diff(v))),
            Div(a, c2) => div(
                sub(mul(a.diff(v), (**c2).clone()), mul((**a).clone(), c2.diff(v))),
                Pow(c2.clone(), b(num(2.0))),
            ),
            Pow(a, w) => {
                if w.is_constant() {
                    let lower = Pow(a.clone(), b(sub((**w).clone(), num(1.0))));
                    mul(mul((**w).clone(), lower), a.diff(v))
                } else {
                    let log_term = mul(w.diff(v), Call(Func::Log, a.clone()));
                    let ratio = div(mul((**w).clone(), a.diff(v)), (**a).clone());
                    mul(self.clone(), add(log_term, ratio))
                }
            }
            Call(f, a) => {
                let inner = a.diff(v);
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Log => div(num(1.0), (**a).clone()),
                    Func::Sqrt => div(num(0.5), self.clone()),
                    Func::Abs => Call(Func::Sign, a.clone()),
                    Func::Sin => Call(Func::Cos, a.clone()),
                    Func::Cos => neg(Call(Func::Sin, a.clone())),
                    Func::Tanh => sub(num(1.0), Pow(b(self.clone()), b(num(2.0)))),
                    Func::Sign => zero(),
                };
                mul(outer, inner)
            }
        }
    }

    /// The n-th derivative with respect to v.
    pub fn diff_n(&self, v: Var, n: usize) -> Expr {
        (0..n).fold(self.clone(), |e, _| e.diff(v))
    }

    /// A callable field on ℝ^d; radial expressions carry their profile.
    pub fn to_field(&self, d: usize) -> Result<ScalarField> {
        if self.arity() > d {
            return Err(DunklError::Domain(format!("expression uses x{} but d = {d}", self.arity())));
        }
        let e = self.clone();
        if self.is_radial() {
            Ok(ScalarField::radial(move |r| e.eval_radial(r)))
        } else {
            Ok(ScalarField::new(move |x| e.eval(x)))
        }
    }
}

/// bump(u) = g(2 - |u|)/(g(2 - |u|) + g(|u| - 1)) with g(s) = e^{-1/s} for s > 0,
/// built from primitives so that `diff` needs no special rule.
fn expand_bump(a: Expr) -> Expr {
    let u = Expr::Call(Func::Abs, Box::new(a));
    let g = |s: Expr| {
        let gate = div(add(num(1.0), Expr::Call(Func::Sign, Box::new(s.clone()))), num(2.0));
        mul(gate, Expr::Call(Func::Exp, Box::new(neg(div(num(1.0), Expr::Call(Func::Abs, Box::new(s)))))))
    };
    let left = g(sub(num(2.0), u.clone()));
    let right = g(sub(u, num(1.0)));
    div(left.clone(), add(left, right))
}

fn num(v: f64) -> Expr {
    Expr::Num(c(v))
}

fn zero() -> Expr {
    num(0.0)
}

fn one() -> Expr {
    num(1.0)
}

fn as_num(e: &Expr) -> Option<Complex64> {
    if let Expr::Num(v) = e {
        Some(*v)
    } else {
        None
    }
}

fn neg(a: Expr) -> Expr {
    match as_num(&a) {
        Some(v) => Expr::Num(-v),
        None => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => Expr::Num(x + y),
        (Some(x), _) if x == c(0.0) => b,
        (_, Some(y)) if y == c(0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => Expr::Num(x - y),
        (_, Some(y)) if y == c(0.0) => a,
        (Some(x), _) if x == c(0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => Expr::Num(x * y),
        (Some(x), _) | (_, Some(x)) if x == c(0.0) => zero(),
        (Some(x), _) if x == c(1.0) => b,
        (_, Some(y)) if y == c(1.0) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), _) if x == c(0.0) => zero(),
        (_, Some(y)) if y == c(1.0) => a,
        (Some(x), Some(y)) => Expr::Num(x / y),
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn fmt_num(v: &Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.im == 0.0 {
        write!(f, "{}", v.re)
    } else if v.re == 0.0 {
        if v.im == 1.0 {
            write!(f, "i")
        } else {
            write!(f, "{}*i", v.im)
        }
    } else {
        write!(f, "({}+{}*i)", v.re, v.im)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => fmt_num(v, f),
            Expr::Var(Var::R) => write!(f, "r"),
            Expr::Var(Var::X(k)) => write!(f, "x{}", k + 1),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "({a})/({b})"),
            Expr::Pow(a, b) => write!(f, "({a})^({b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
