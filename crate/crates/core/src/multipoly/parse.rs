//! Text grammar for polynomials and exact constants.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := atom ('^' integer)?
//! atom    := integer | 'tau' | 'sqrt5' | 'x' | 'y' | 'z' | 'w' | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants, so `p/q` literals and
//! expressions such as `(2*tau+1)/4` stay exact. Juxtaposition multiplies,
//! which admits factored forms like `(tau^2x^2-y^2)(tau^2y^2-z^2)`.
//! `**` is accepted for `^`, and `−`, `·` for `-`, `*`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exactnum::{sqrt5, tau, GoldenNumber};

use super::poly::{MultiPoly, Var};

type P = MultiPoly<GoldenNumber>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        offset,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i].1 == '.' {
                    return Err(err(chars[i].0, "decimal literals are not exact; use p/q"));
                }
                let s: String = chars[start..i].iter().map(|c| c.1).collect();
                out.push((pos, Tok::Num(s.parse().expect("digits"))));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|c| c.1).collect();
                out.push((pos, Tok::Ident(s)));
            }
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' | '−' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' | '·' => {
                if c == '*' && i + 1 < chars.len() && chars[i + 1].1 == '*' {
                    out.push((pos, Tok::Caret));
                    i += 2;
                } else {
                    out.push((pos, Tok::Star));
                    i += 1;
                }
            }
            '/' => {
                out.push((pos, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            other => return Err(err(pos, format!("unexpected character {other:?}"))),
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

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<P, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<P, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.unary()?;
                    let c = d
                        .as_constant()
                        .ok_or_else(|| err(at, "division by a non-constant expression"))?;
                    let inv = c.inv().map_err(|_| err(at, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<P, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<P, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.next() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .ok()
                        .filter(|e| *e <= 255)
                        .ok_or_else(|| err(at, "exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(err(at, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<P, ParseError> {
        let at = self.offset();
        match self.next() {
            Some(Tok::Num(n)) => Ok(P::constant(GoldenNumber::from_rational(
                BigRational::from_integer(n),
            ))),
            Some(Tok::Ident(s)) => match s.as_str() {
                "tau" => Ok(P::constant(tau())),
                "sqrt5" => Ok(P::constant(sqrt5())),
                "x" => Ok(P::var(Var::X)),
                "y" => Ok(P::var(Var::Y)),
                "z" => Ok(P::var(Var::Z)),
                "w" => Ok(P::var(Var::W)),
                other => {
                    // allow juxtaposed variables such as `xy`
                    if other.chars().all(|c| "xyzw".contains(c)) {
                        let mut p = P::one();
                        for c in other.chars() {
                            let v = match c {
                                'x' => Var::X,
                                'y' => Var::Y,
                                'z' => Var::Z,
                                _ => Var::W,
                            };
                            p = &p * &P::var(v);
                        }
                        Ok(p)
                    } else {
                        Err(err(at, format!("unknown identifier {other:?}")))
                    }
                }
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err(self.offset(), "expected ')'")),
                }
            }
            Some(t) => Err(err(at, format!("unexpected token {t:?}"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

/// Parse a polynomial in `x, y, z, w` with coefficients in Q(√5).
pub fn parse_poly(src: &str) -> Result<MultiPoly<GoldenNumber>, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(err(p.offset(), "trailing input"));
    }
    Ok(out)
}

/// Parse an exact constant such as `(2*tau+1)/4` or `-3/8`.
pub fn parse_constant(src: &str) -> Result<GoldenNumber, ParseError> {
    parse_poly(src)?
        .as_constant()
        .ok_or_else(|| err(0, "expected a constant, found variables"))
}
