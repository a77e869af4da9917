//! Text grammar for polynomial ingestion.
//!
//! Integer literals, rational constants via `/`, variables `t` and `s`,
//! operators `+ - * / ^` and parentheses. `^` takes a nonnegative integer
//! exponent; `/` requires a nonzero constant divisor. Errors carry the byte
//! offset of the offending token.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::{QBiPoly, QPoly, Rat};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allow_s: bool,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<QBiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QBiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    let op_at = self.pos;
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let c = match rhs.as_poly_t() {
                        Some(p) if p.is_constant() && !p.is_zero() => p.coeff(0),
                        _ if rhs.is_zero() => return Err(err(op_at, "division by zero constant")),
                        _ => {
                            return Err(err(
                                op_at,
                                "division is only supported by a nonzero constant",
                            ))
                        }
                    };
                    acc = acc.scale(&(Rat::from_integer(BigInt::from(1)) / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<QBiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp_at = self.pos;
            let e = self.uint()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| err(exp_at, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QBiPoly> {
        let at = self.pos;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(err(self.pos, "expected ')'")),
                }
            }
            Some(b't') => {
                self.pos += 1;
                Ok(QBiPoly::var_t())
            }
            Some(b's') if self.allow_s => {
                self.pos += 1;
                Ok(QBiPoly::var_s())
            }
            Some(b's') => Err(err(self.pos, "variable s is not allowed here")),
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(QBiPoly::constant(Rat::from_integer(n)))
            }
            Some(c) => Err(err(self.pos, format!("unexpected character {:?}", c as char))),
            None => Err(err(at, "unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, "expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<BigInt>()
            .map_err(|_| err(start, "invalid integer"))
    }
}

fn parse_with(src: &str, allow_s: bool) -> Result<QBiPoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        allow_s,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(err(p.pos, "trailing input"));
    }
    Ok(out)
}

/// Parses a bivariate polynomial in `t` and `s`.
pub fn parse_bipoly(src: &str) -> Result<QBiPoly> {
    parse_with(src, true)
}

/// Parses a univariate polynomial in `t`.
pub fn parse_poly(src: &str) -> Result<QPoly> {
    let b = parse_with(src, false)?;
    if b.is_zero() {
        return Ok(QPoly::zero());
    }
    Ok(b.as_poly_t().expect("s rejected during parsing").clone())
}
