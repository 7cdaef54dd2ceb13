//! One-variable real expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `^` binds tightest and is right-associative, so `-x^2` is `-(x^2)` and
//! `2^3^2` is `2^(3^2)`. The callable functions are `ln`, `exp`, `sqrt`,
//! `abs` and the two-argument `pow`. Any other identifier is the free
//! variable; at most one distinct name may appear.

use std::fmt;
use std::str::FromStr;

use crate::error::{DomainError, DomainReason, ParseError};

/// Result of evaluating an expression at one point. Never `Ok` with a
/// non-finite value.
pub type EvalOutcome = Result<f64, DomainError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Ln,
    Exp,
    Sqrt,
    Abs,
    Pow,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "pow" => Func::Pow,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Pow => "pow",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var(String),
    Neg(Box<Node>),
    Binary {
        op: BinOp,
        lhs: Box<Node>,
        rhs: Box<Node>,
    },
    Call {
        func: Func,
        args: Vec<Node>,
    },
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Node {
    fn precedence(&self) -> u8 {
        match self {
            Node::Num(_) | Node::Var(_) | Node::Call { .. } => PREC_ATOM,
            Node::Neg(_) => PREC_UNARY,
            Node::Binary { op, .. } => match op {
                BinOp::Add | BinOp::Sub => PREC_ADD,
                BinOp::Mul | BinOp::Div => PREC_MUL,
                BinOp::Pow => PREC_POW,
            },
        }
    }

    fn write(&self, out: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let wrap = self.precedence() < min_prec;
        if wrap {
            out.write_str("(")?;
        }
        match self {
            Node::Num(v) => write!(out, "{v}")?,
            Node::Var(name) => out.write_str(name)?,
            Node::Neg(inner) => {
                out.write_str("-")?;
                inner.write(out, PREC_UNARY)?;
            }
            Node::Binary { op, lhs, rhs } => {
                let p = self.precedence();
                if *op == BinOp::Pow {
                    lhs.write(out, PREC_ATOM)?;
                    out.write_str("^")?;
                    rhs.write(out, PREC_UNARY)?;
                } else {
                    lhs.write(out, p)?;
                    write!(out, " {} ", op.symbol())?;
                    rhs.write(out, p + 1)?;
                }
            }
            Node::Call { func, args } => {
                write!(out, "{}(", func.name())?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    arg.write(out, 0)?;
                }
                out.write_str(")")?;
            }
        }
        if wrap {
            out.write_str(")")?;
        }
        Ok(())
    }

    fn eval(&self, x: f64) -> EvalOutcome {
        let fail = |reason| Err(DomainError::new(self.to_string(), x, reason));
        let value = match self {
            Node::Num(v) => *v,
            Node::Var(_) => x,
            Node::Neg(inner) => -inner.eval(x)?,
            Node::Binary { op, lhs, rhs } => {
                let l = lhs.eval(x)?;
                let r = rhs.eval(x)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return fail(DomainReason::DivisionByZero);
                        }
                        l / r
                    }
                    BinOp::Pow => match checked_pow(l, r) {
                        Ok(v) => v,
                        Err(reason) => return fail(reason),
                    },
                }
            }
            Node::Call { func, args } => {
                let u = args[0].eval(x)?;
                match func {
                    Func::Ln => {
                        if u <= 0.0 {
                            return fail(DomainReason::LogNonPositive);
                        }
                        u.ln()
                    }
                    Func::Exp => u.exp(),
                    Func::Sqrt => {
                        if u < 0.0 {
                            return fail(DomainReason::SqrtNegative);
                        }
                        u.sqrt()
                    }
                    Func::Abs => u.abs(),
                    Func::Pow => {
                        let e = args[1].eval(x)?;
                        match checked_pow(u, e) {
                            Ok(v) => v,
                            Err(reason) => return fail(reason),
                        }
                    }
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            fail(DomainReason::NonFinite)
        }
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Node::Num(_) => {}
            Node::Var(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            Node::Neg(inner) => inner.collect_vars(out),
            Node::Binary { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            Node::Call { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Real power restricted to real results.
pub(crate) fn checked_pow(base: f64, exponent: f64) -> Result<f64, DomainReason> {
    if base == 0.0 && exponent < 0.0 {
        return Err(DomainReason::ZeroToNegativePower);
    }
    if base < 0.0 && exponent.fract() != 0.0 {
        return Err(DomainReason::NegativeBaseFractionalExponent);
    }
    Ok(base.powf(exponent))
}

/// A parsed expression with at most one free variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
    var: Option<String>,
}

impl Expression {
    pub fn root(&self) -> &Node {
        &self.root
    }

    /// The single free variable, or `None` for a constant expression.
    pub fn free_variable(&self) -> Option<&str> {
        self.var.as_deref()
    }

    /// Evaluates with the free variable bound to `x`.
    pub fn evaluate(&self, x: f64) -> EvalOutcome {
        if !x.is_finite() {
            let name = self.var.clone().unwrap_or_else(|| "x".to_owned());
            return Err(DomainError::new(name, x, DomainReason::NonFinite));
        }
        self.root.eval(x)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl FromStr for Expression {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

pub fn parse(source: &str) -> Result<Expression, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0 };
    if matches!(parser.peek().kind, Tok::Eof) {
        return Err(ParseError {
            position: 1,
            message: "empty expression".into(),
        });
    }
    let root = parser.expr()?;
    let tail = parser.peek();
    if !matches!(tail.kind, Tok::Eof) {
        return Err(ParseError {
            position: tail.pos,
            message: format!("unexpected {}", tail.kind.describe()),
        });
    }

    let mut vars = Vec::new();
    root.collect_vars(&mut vars);
    if vars.len() > 1 {
        let second = vars[1];
        let position = parser
            .tokens
            .iter()
            .find(|t| matches!(&t.kind, Tok::Ident(n) if n == second))
            .map_or(1, |t| t.pos);
        return Err(ParseError {
            position,
            message: format!("more than one free variable ({})", vars.join(", ")),
        });
    }
    let var = vars.first().map(|v| v.to_string());
    Ok(Expression { root, var })
}

#[derive(Debug, Clone, PartialEq)]
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
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(n) => format!("identifier `{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    /// 1-based character column.
    pos: usize,
}

fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(kind) = single {
            tokens.push(Token { kind, pos });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let mantissa: String = chars[start..i].iter().collect();
            if !mantissa.chars().any(|d| d.is_ascii_digit()) {
                return Err(ParseError {
                    position: pos,
                    message: "malformed number".into(),
                });
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
            let value: f64 = text.parse().map_err(|_| ParseError {
                position: pos,
                message: format!("malformed number `{text}`"),
            })?;
            if !value.is_finite() {
                return Err(ParseError {
                    position: pos,
                    message: format!("number `{text}` is out of range"),
                });
            }
            tokens.push(Token {
                kind: Tok::Num(value),
                pos,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push(Token {
                kind: Tok::Ident(chars[start..i].iter().collect()),
                pos,
            });
            continue;
        }
        return Err(ParseError {
            position: pos,
            message: format!("unexpected character `{c}`"),
        });
    }
    tokens.push(Token {
        kind: Tok::Eof,
        pos: chars.len() + 1,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if !matches!(tok.kind, Tok::Eof) {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let tok = self.bump();
        if tok.kind == want {
            Ok(())
        } else {
            Err(ParseError {
                position: tok.pos,
                message: format!(
                    "expected {}, found {}",
                    want.describe(),
                    tok.kind.describe()
                ),
            })
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().kind {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if matches!(self.peek().kind, Tok::Minus) {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if matches!(self.peek().kind, Tok::Caret) {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Node::Binary {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
            });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let tok = self.bump();
        match tok.kind {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let func = Func::lookup(&name);
                if !matches!(self.peek().kind, Tok::LParen) {
                    if func.is_some() {
                        return Err(ParseError {
                            position: tok.pos,
                            message: format!("function `{name}` needs an argument list"),
                        });
                    }
                    return Ok(Node::Var(name));
                }
                let Some(func) = func else {
                    return Err(ParseError {
                        position: tok.pos,
                        message: format!("unknown function `{name}`"),
                    });
                };
                self.bump();
                let mut args = vec![self.expr()?];
                while matches!(self.peek().kind, Tok::Comma) {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen)?;
                if args.len() != func.arity() {
                    return Err(ParseError {
                        position: tok.pos,
                        message: format!(
                            "`{}` takes {} argument(s), got {}",
                            func.name(),
                            func.arity(),
                            args.len()
                        ),
                    });
                }
                Ok(Node::Call { func, args })
            }
            other => Err(ParseError {
                position: tok.pos,
                message: format!("unexpected {}", other.describe()),
            }),
        }
    }
}
