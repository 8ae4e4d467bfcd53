//! Recursive-descent parser for integer polynomials in one variable `x`.
//!
//! Grammar:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (['*'] power)*
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies, so `7x`, `3x^2` and `2(x+1)` are accepted.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

const MAX_EXPONENT: u32 = 10_000;

pub fn parse_poly(input: &str) -> Result<IntPoly> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
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

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(c) if c.is_ascii_digit() || c == b'x' || c == b'X' || c == b'(' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let digits = self.digits();
        let e: u32 = digits
            .parse()
            .map_err(|_| self.error("expected a nonnegative exponent"))?;
        if e > MAX_EXPONENT {
            return Err(self.error("exponent too large"));
        }
        if base == IntPoly::x() {
            return Ok(IntPoly::monomial(e as usize));
        }
        let mut acc = IntPoly::constant(BigInt::from(1));
        for _ in 0..e {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn atom(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some(b'x' | b'X') => {
                self.pos += 1;
                Ok(IntPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self
                    .digits()
                    .parse()
                    .map_err(|_| self.error("bad integer"))?;
                Ok(IntPoly::constant(n))
            }
            Some(_) => Err(self.error("expected an integer, 'x' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
