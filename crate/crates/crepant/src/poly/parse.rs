//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (no implicit multiplication, no division operator — `/` only
//! separates the two halves of a rational literal):
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nonneg-integer)?
//! base     := rational | variable | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! The leading sign is a printer-friendly extension: negative leading
//! coefficients render as `-3/2*s^2*t + ...` and must re-parse.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Rat, RatPoly};

/// Syntax or validation failure, with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                toks.push((start, Tok::Num(digits.parse().unwrap())));
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character `{}`", &text[i..i + 1]),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [&'a str],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<RatPoly, ParseError> {
        let mut negate_first = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate_first = true;
                self.bump();
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate_first { -&first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatPoly, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatPoly, ParseError> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let k: u32 = n
                        .try_into()
                        .map_err(|_| ParseError {
                            pos: self.toks[self.pos - 1].0,
                            msg: "exponent too large".into(),
                        })?;
                    Ok(base.pow(k))
                }
                Some(Tok::Minus) => {
                    self.pos -= 1;
                    self.err("negative exponent not allowed")
                }
                _ => {
                    self.pos -= 1;
                    self.err("expected non-negative integer exponent after `^`")
                }
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<RatPoly, ParseError> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut value = Rat::from_integer(n);
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) => {
                            if d.is_zero() {
                                self.pos -= 1;
                                return self.err("zero denominator");
                            }
                            value /= Rat::from_integer(d);
                        }
                        Some(Tok::Minus) => {
                            self.pos -= 1;
                            return self.err("denominator must be a positive integer");
                        }
                        _ => {
                            self.pos -= 1;
                            return self.err("expected denominator after `/`");
                        }
                    }
                }
                Ok(RatPoly::constant(self.vars, value))
            }
            Some(Tok::Ident(name)) => {
                if self.vars.contains(&name.as_str()) {
                    Ok(RatPoly::var(self.vars, &name))
                } else {
                    self.pos -= 1;
                    self.err(format!("undeclared variable `{name}`"))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        self.err("expected `)`")
                    }
                }
            }
            _ => {
                self.pos -= 1;
                self.err("expected a rational, a variable, or `(`")
            }
        }
    }
}

pub(super) fn parse(text: &str, vars: &[&str]) -> Result<RatPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
        end: text.len(),
    };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after expression");
    }
    Ok(poly)
}
