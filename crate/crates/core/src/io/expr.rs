//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := nat | nat '/' nat | ident | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit. A leading minus is accepted at the
//! start of an expression (including inside parentheses); `nat '/' nat` is
//! the only use of `/`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Polynomial, Rational, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
}

/// Parsed expression tree, before it is interpreted in a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Int(BigInt),
    Rational(BigInt, BigInt),
    Var { name: String, offset: usize },
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Nat(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character {ch:?}")));
            }
        };
        out.push((start, tok));
        i += 1;
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

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            ExprAst::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Some(Tok::Nat(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| syntax(at, "exponent too large"))?;
                    return Ok(ExprAst::Pow(Box::new(base), e));
                }
                Some(Tok::Minus) => return Err(syntax(at, "negative exponents are not allowed")),
                _ => return Err(syntax(at, "expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<ExprAst, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Nat(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dat = self.offset();
                    match self.bump() {
                        Some(Tok::Nat(d)) if d.is_zero() => Err(syntax(dat, "zero denominator")),
                        Some(Tok::Nat(d)) => Ok(ExprAst::Rational(n, d)),
                        _ => Err(syntax(dat, "expected an integer denominator")),
                    }
                } else {
                    Ok(ExprAst::Int(n))
                }
            }
            Some(Tok::Ident(name)) => Ok(ExprAst::Var { name, offset: at }),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let cat = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(syntax(cat, "expected `)`")),
                }
            }
            Some(t) => Err(syntax(at, format!("unexpected token {t:?}"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<ExprAst, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let at = p.offset();
        let msg = match p.peek() {
            Some(Tok::Ident(_)) | Some(Tok::Nat(_)) | Some(Tok::LParen) => {
                "implicit multiplication is not allowed; use `*`".to_string()
            }
            Some(t) => format!("unexpected token {t:?}"),
            None => unreachable!(),
        };
        return Err(syntax(at, msg));
    }
    Ok(e)
}

impl ExprAst {
    pub fn to_polynomial(&self, vars: &Arc<VarSet>) -> Result<Polynomial, ParseError> {
        Ok(match self {
            ExprAst::Int(n) => Polynomial::constant(vars, Rational::from_integer(n.clone())),
            ExprAst::Rational(n, d) => Polynomial::constant(vars, Rational::new(n.clone(), d.clone())),
            ExprAst::Var { name, offset } => {
                let i = vars.index_of(name).ok_or_else(|| ParseError::UnknownVariable {
                    name: name.clone(),
                    offset: *offset,
                })?;
                Polynomial::var_at(vars, i)
            }
            ExprAst::Neg(a) => -a.to_polynomial(vars)?,
            ExprAst::Add(a, b) => a.to_polynomial(vars)? + b.to_polynomial(vars)?,
            ExprAst::Sub(a, b) => a.to_polynomial(vars)? - b.to_polynomial(vars)?,
            ExprAst::Mul(a, b) => a.to_polynomial(vars)? * b.to_polynomial(vars)?,
            ExprAst::Pow(a, e) => {
                let base = a.to_polynomial(vars)?;
                if *e == 0 {
                    Polynomial::constant(vars, Rational::one())
                } else {
                    base.pow(*e)
                }
            }
        })
    }
}

pub fn parse_poly(text: &str, vars: &Arc<VarSet>) -> Result<Polynomial, ParseError> {
    parse_expr(text)?.to_polynomial(vars)
}

pub fn print_poly(p: &Polynomial) -> String {
    p.to_string()
}
