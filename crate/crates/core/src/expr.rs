//! Arithmetic expressions over `t, x1..xm` for user-defined right-hand sides.
//!
//! Grammar (recursive descent, no implicit multiplication):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right-associative
//! primary := number | 't' | 'x'<j> | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | exp | log | sqrt | abs
//! ```
//!
//! `^` binds tighter than unary minus, so `-2^2 = -4` and `2^3^2 = 512`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Time,
    /// Zero-based dependent variable index (`x1` is `Var(0)`).
    Var(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed right-hand side over `m` dependent variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    vars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("variable `x{index}` out of range (expected x1..x{vars})")]
    VariableOutOfRange { index: usize, vars: usize },
    #[error("function `{name}` takes exactly one argument, got {got}")]
    Arity { name: &'static str, got: usize },
    #[error("unbalanced parentheses")]
    Unbalanced,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("log of non-positive value {0}")]
    LogDomain(f64),
    #[error("sqrt of negative value {0}")]
    SqrtDomain(f64),
    #[error("non-finite result {value} from `{op}`")]
    NonFinite { op: String, value: f64 },
    #[error("expression uses x{index} but only {given} values were supplied")]
    MissingVariable { index: usize, given: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::BadNumber(text.to_string()),
                })?;
                out.push((start, Tok::Num(value)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => out.push((start, Tok::Op(c as char))),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b',' => out.push((start, Tok::Comma)),
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    vars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd),
            Some(Tok::RParen) => self.err(ParseErrorKind::Unbalanced),
            Some(t) => self.err(ParseErrorKind::UnexpectedToken(describe(t))),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let start = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Node::Num(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::Unbalanced,
                    }),
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.identifier(&name, start)
            }
            _ => Err(self.unexpected()),
        }
    }

    fn identifier(&mut self, name: &str, start: usize) -> Result<Node, ParseError> {
        if name == "t" {
            return Ok(Node::Time);
        }
        if let Some(func) = Func::lookup(name) {
            return self.call(func, start);
        }
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let index: usize = digits.parse().unwrap_or(usize::MAX);
                if index == 0 || index > self.vars {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::VariableOutOfRange {
                            index,
                            vars: self.vars,
                        },
                    });
                }
                return Ok(Node::Var(index - 1));
            }
        }
        Err(ParseError {
            offset: start,
            kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
        })
    }

    fn call(&mut self, func: Func, start: usize) -> Result<Node, ParseError> {
        let arity = |got| ParseError {
            offset: start,
            kind: ParseErrorKind::Arity {
                name: func.name(),
                got,
            },
        };
        if self.peek() != Some(&Tok::LParen) {
            return Err(arity(0));
        }
        self.pos += 1;
        if self.peek() == Some(&Tok::RParen) {
            return Err(arity(0));
        }
        let mut args = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        match self.next() {
            Some(Tok::RParen) => {}
            _ => {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::Unbalanced,
                })
            }
        }
        if args.len() != 1 {
            return Err(arity(args.len()));
        }
        Ok(Node::Call(func, Box::new(args.remove(0))))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => v.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Op(c) => c.to_string(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Comma => ",".into(),
    }
}

impl Expr {
    /// Parses `src` as a function of `t` and `x1..x{vars}`.
    pub fn parse(src: &str, vars: usize) -> Result<Self, ParseError> {
        let toks = tokenize(src)?;
        let mut p = Parser {
            toks: &toks,
            pos: 0,
            end: src.len(),
            vars,
        };
        let root = p.expr()?;
        if p.pos < toks.len() {
            return Err(p.unexpected());
        }
        Ok(Self { root, vars })
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn eval(&self, x: &[f64], t: f64) -> Result<f64, EvalError> {
        eval_node(&self.root, x, t)
    }
}

fn finite(op: impl FnOnce() -> String, value: f64) -> Result<f64, EvalError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(EvalError::NonFinite { op: op(), value })
    }
}

fn eval_node(node: &Node, x: &[f64], t: f64) -> Result<f64, EvalError> {
    match node {
        Node::Num(v) => Ok(*v),
        Node::Time => Ok(t),
        Node::Var(i) => x.get(*i).copied().ok_or(EvalError::MissingVariable {
            index: i + 1,
            given: x.len(),
        }),
        Node::Neg(inner) => Ok(-eval_node(inner, x, t)?),
        Node::Binary(op, a, b) => {
            let (a, b) = (eval_node(a, x, t)?, eval_node(b, x, t)?);
            let value = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    a / b
                }
                BinOp::Pow => {
                    if b.fract() == 0.0 && b.abs() <= f64::from(i32::MAX) {
                        a.powi(b as i32)
                    } else {
                        a.powf(b)
                    }
                }
            };
            finite(|| op.symbol().to_string(), value)
        }
        Node::Call(func, arg) => {
            let v = eval_node(arg, x, t)?;
            let value = match func {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Tan => v.tan(),
                Func::Exp => v.exp(),
                Func::Log => {
                    if v <= 0.0 {
                        return Err(EvalError::LogDomain(v));
                    }
                    v.ln()
                }
                Func::Sqrt => {
                    if v < 0.0 {
                        return Err(EvalError::SqrtDomain(v));
                    }
                    v.sqrt()
                }
                Func::Abs => v.abs(),
            };
            finite(|| func.name().to_string(), value)
        }
    }
}

impl fmt::Display for Node {
    /// Fully parenthesized form that re-parses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) => write!(f, "{v:?}"),
            Node::Time => f.write_str("t"),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Neg(inner) => write!(f, "(-{inner})"),
            Node::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Node::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}
