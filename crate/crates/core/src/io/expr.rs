//! Expression grammar shared by every textual input.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INTEGER)?
//! atom   := INTEGER | NAME | 'D(' NAME ')' | '[' ... ']' | 'inv(' expr ')' | '(' expr ')'
//! ```
//!
//! `D(x)` and bracketed `[...]` tokens are opaque symbols; their meaning is
//! supplied by the caller when evaluating.

use num_bigint::BigInt;

use super::error::{IoError, IoResult};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Sym { name: String, pos: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div { lhs: Box<Expr>, rhs: Box<Expr>, pos: usize },
    Pow(Box<Expr>, u32),
    Inv { arg: Box<Expr>, pos: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(src: &str) -> IoResult<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => {
                let close = chars[i..].iter().position(|&c| c == ']').map(|p| i + p);
                let Some(close) = close else {
                    return Err(IoError::Syntax { pos: i, msg: "unterminated `[`".into() });
                };
                let inner: String = chars[i + 1..close].iter().filter(|c| !c.is_whitespace()).collect();
                i = close + 1;
                out.push((Tok::Sym(format!("[{inner}]")), start));
                continue;
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("digits")), start));
                continue;
            }
            c if is_name_start(c) => {
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                if name == "D" && chars.get(i) == Some(&'(') {
                    let mut j = i + 1;
                    while j < chars.len() && chars[j].is_whitespace() {
                        j += 1;
                    }
                    let s = j;
                    while j < chars.len() && is_name_char(chars[j]) {
                        j += 1;
                    }
                    let inner: String = chars[s..j].iter().collect();
                    while j < chars.len() && chars[j].is_whitespace() {
                        j += 1;
                    }
                    if inner.is_empty() || chars.get(j) != Some(&')') {
                        return Err(IoError::Syntax { pos: start, msg: "expected `D(name)`".into() });
                    }
                    i = j + 1;
                    out.push((Tok::Sym(format!("D({inner})")), start));
                } else {
                    out.push((Tok::Name(name), start));
                }
                continue;
            }
            other => return Err(IoError::Syntax { pos: i, msg: format!("unexpected character `{other}`") }),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> IoResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(IoError::Syntax { pos: self.pos(), msg: format!("expected {what}") })
        }
    }

    fn expr(&mut self) -> IoResult<Expr> {
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

    fn term(&mut self) -> IoResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let (_, pos) = self.bump();
                    lhs = Expr::Div { lhs: Box::new(lhs), rhs: Box::new(self.unary()?), pos };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> IoResult<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> IoResult<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().0 {
            Tok::Int(n) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| IoError::Syntax { pos, msg: "exponent too large".into() })?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(IoError::Syntax { pos, msg: "expected a non-negative integer exponent".into() }),
        }
    }

    fn atom(&mut self) -> IoResult<Expr> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr::Num(n)),
            Tok::Sym(name) => Ok(Expr::Sym { name, pos }),
            Tok::Name(name) if name == "inv" && *self.peek() == Tok::LParen => {
                self.bump();
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Inv { arg: Box::new(arg), pos })
            }
            Tok::Name(name) => Ok(Expr::Sym { name, pos }),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::End => Err(IoError::Syntax { pos, msg: "unexpected end of input".into() }),
            other => Err(IoError::Syntax { pos, msg: format!("unexpected token {other:?}") }),
        }
    }
}

/// Parses a complete expression.
pub fn parse(src: &str) -> IoResult<Expr> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(IoError::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}

impl Expr {
    /// Symbols in order of first appearance.
    pub fn symbols(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Num(_) => {}
                Expr::Sym { name, .. } => {
                    if !out.contains(name) {
                        out.push(name.clone());
                    }
                }
                Expr::Neg(a) | Expr::Pow(a, _) => walk(a, out),
                Expr::Inv { arg, .. } => walk(arg, out),
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Expr::Div { lhs, rhs, .. } => {
                    walk(lhs, out);
                    walk(rhs, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Evaluates in any structure given the primitive operations.
    /// `div` receives the source position for error reporting.
    pub fn eval<T, E>(&self, ops: &mut E) -> IoResult<T>
    where
        E: ExprOps<T>,
    {
        Ok(match self {
            Expr::Num(n) => ops.num(n)?,
            Expr::Sym { name, pos } => ops.sym(name, *pos)?,
            Expr::Neg(a) => {
                let x = a.eval(ops)?;
                ops.neg(x)
            }
            Expr::Add(a, b) => {
                let (x, y) = (a.eval(ops)?, b.eval(ops)?);
                ops.add(x, y)?
            }
            Expr::Sub(a, b) => {
                let (x, y) = (a.eval(ops)?, b.eval(ops)?);
                ops.sub(x, y)?
            }
            Expr::Mul(a, b) => {
                let (x, y) = (a.eval(ops)?, b.eval(ops)?);
                ops.mul(x, y)?
            }
            Expr::Div { lhs, rhs, pos } => {
                let (x, y) = (lhs.eval(ops)?, rhs.eval(ops)?);
                let inv = ops.inv(y, &render(rhs), *pos)?;
                ops.mul(x, inv)?
            }
            Expr::Pow(a, e) => {
                let x = a.eval(ops)?;
                ops.pow(x, *e)?
            }
            Expr::Inv { arg, pos } => {
                let x = arg.eval(ops)?;
                ops.inv(x, &render(arg), *pos)?
            }
        })
    }
}

/// Primitive operations used by [`Expr::eval`].
pub trait ExprOps<T> {
    fn num(&mut self, n: &BigInt) -> IoResult<T>;
    fn sym(&mut self, name: &str, pos: usize) -> IoResult<T>;
    fn neg(&mut self, a: T) -> T;
    fn add(&mut self, a: T, b: T) -> IoResult<T>;
    fn sub(&mut self, a: T, b: T) -> IoResult<T>;
    fn mul(&mut self, a: T, b: T) -> IoResult<T>;
    fn pow(&mut self, a: T, e: u32) -> IoResult<T>;
    fn inv(&mut self, a: T, src: &str, pos: usize) -> IoResult<T>;
}

/// Compact re-rendering of a subexpression, for error messages.
pub fn render(e: &Expr) -> String {
    match e {
        Expr::Num(n) => n.to_string(),
        Expr::Sym { name, .. } => name.clone(),
        Expr::Neg(a) => format!("-{}", render_atom(a)),
        Expr::Add(a, b) => format!("{} + {}", render(a), render(b)),
        Expr::Sub(a, b) => format!("{} - {}", render(a), render_atom(b)),
        Expr::Mul(a, b) if matches!(**a, Expr::Neg(_)) => format!("{}*{}", render(a), render_atom(b)),
        Expr::Mul(a, b) => format!("{}*{}", render_atom(a), render_atom(b)),
        Expr::Div { lhs, rhs, .. } => format!("{}/{}", render_atom(lhs), render_atom(rhs)),
        Expr::Pow(a, k) => format!("{}^{k}", render_atom(a)),
        Expr::Inv { arg, .. } => format!("inv({})", render(arg)),
    }
}

fn render_atom(e: &Expr) -> String {
    match e {
        Expr::Num(_) | Expr::Sym { .. } | Expr::Inv { .. } | Expr::Pow(..) => render(e),
        _ => format!("({})", render(e)),
    }
}
