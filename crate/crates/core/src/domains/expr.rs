//! Arithmetic expressions in `theta` and `phi`.
//!
//! Grammar, with `^` right-associative and binding looser than unary minus:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := unary ('^' factor)?
//! unary   := '-' unary | primary
//! primary := number | ident | ident '(' args ')' | '(' expr ')'
//! ```

use std::fmt;

use thiserror::Error;

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {offset}: {message}")]
pub struct ParseError {
    /// Byte offset into the source text.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Theta,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Asin,
    Acos,
    Atan,
    Sqrt,
    Abs,
    Exp,
    Log,
    Min,
    Max,
    Pow,
}

impl Func {
    const TABLE: [(&'static str, Func); 13] = [
        ("sin", Func::Sin),
        ("cos", Func::Cos),
        ("tan", Func::Tan),
        ("asin", Func::Asin),
        ("acos", Func::Acos),
        ("atan", Func::Atan),
        ("sqrt", Func::Sqrt),
        ("abs", Func::Abs),
        ("exp", Func::Exp),
        ("log", Func::Log),
        ("min", Func::Min),
        ("max", Func::Max),
        ("pow", Func::Pow),
    ];

    fn lookup(name: &str) -> Option<Func> {
        Self::TABLE.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
    }

    pub fn name(&self) -> &'static str {
        Self::TABLE.iter().find(|(_, f)| f == self).unwrap().0
    }

    pub fn arity(&self) -> usize {
        match self {
            Func::Min | Func::Max | Func::Pow => 2,
            _ => 1,
        }
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Const(Constant),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn eval(&self, theta: f64, phi: f64) -> f64 {
        match self {
            Expr::Num(x) => *x,
            Expr::Var(Var::Theta) => theta,
            Expr::Var(Var::Phi) => phi,
            Expr::Const(Constant::Pi) => std::f64::consts::PI,
            Expr::Const(Constant::E) => std::f64::consts::E,
            Expr::Neg(a) => -a.eval(theta, phi),
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(theta, phi), b.eval(theta, phi));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, args) => {
                let x = args[0].eval(theta, phi);
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Asin => x.asin(),
                    Func::Acos => x.acos(),
                    Func::Atan => x.atan(),
                    Func::Sqrt => x.sqrt(),
                    Func::Abs => x.abs(),
                    Func::Exp => x.exp(),
                    Func::Log => x.ln(),
                    Func::Min => x.min(args[1].eval(theta, phi)),
                    Func::Max => x.max(args[1].eval(theta, phi)),
                    Func::Pow => x.powf(args[1].eval(theta, phi)),
                }
            }
        }
    }
}

/// Fully parenthesized; parsing the output yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::Var(Var::Theta) => f.write_str("theta"),
            Expr::Var(Var::Phi) => f.write_str("phi"),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {sym} {b})")
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(u8),
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Op(c) => write!(f, "'{}'", *c as char),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
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
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push((Tok::Op(c), start));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, start));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, start));
                i += 1;
            }
            b',' => {
                out.push((Tok::Comma, start));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
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
                    message: format!("malformed number '{text}'"),
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        offset: start,
                        message: format!("number '{text}' out of range"),
                    });
                }
                out.push((Tok::Num(value), start));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(ParseError {
                    offset: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { offset: self.offset(), message: message.into() }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op(b'+') => BinOp::Add,
                Tok::Op(b'-') => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Op(b'*') => BinOp::Mul,
                Tok::Op(b'/') => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let base = self.unary()?;
        let out = if *self.peek() == Tok::Op(b'^') {
            self.bump();
            let exp = self.factor()?;
            Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp))
        } else {
            base
        };
        self.depth -= 1;
        Ok(out)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op(b'-') {
            self.enter()?;
            self.bump();
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(x) => Ok(Expr::Num(x)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    let func = Func::lookup(&name).ok_or_else(|| ParseError {
                        offset: at,
                        message: format!("unknown function '{name}'"),
                    })?;
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen)?;
                    if args.len() != func.arity() {
                        return Err(ParseError {
                            offset: at,
                            message: format!(
                                "function '{name}' expects {} argument(s), got {}",
                                func.arity(),
                                args.len()
                            ),
                        });
                    }
                    return Ok(Expr::Call(func, args));
                }
                match name.as_str() {
                    "theta" => Ok(Expr::Var(Var::Theta)),
                    "phi" => Ok(Expr::Var(Var::Phi)),
                    "pi" => Ok(Expr::Const(Constant::Pi)),
                    "e" => Ok(Expr::Const(Constant::E)),
                    _ => Err(ParseError { offset: at, message: format!("unknown identifier '{name}'") }),
                }
            }
            _ => Err(ParseError { offset: at, message: "expected operand".into() }),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0, depth: 0 };
    if *parser.peek() == Tok::End {
        return Err(parser.error("empty expression"));
    }
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(format!("unexpected {} after expression", parser.peek())));
    }
    Ok(e)
}
