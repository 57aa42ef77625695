//! Reader for polynomial expressions such as `x + 3`, `2x^2 - 1/2*y` or
//! `(x + y + z)^2`.
//!
//! Grammar: `sum := ['-'] term (('+' | '-') term)*`, `term := power ('*'?
//! power)*`, `power := atom ('^' digits)?`, `atom := number | name | '(' sum
//! ')'`. Numbers are scalar literals (`3`, `1/2`, `0.25`, depending on the
//! scalar type); names start with a letter and continue with letters, digits
//! or `_`, so `xy` is one variable and `x y` or `x*y` is a product.

use crate::algebra::{Additive, Ring, Scalar, Semiring};
use crate::regexp::ParseError;

use super::PolyM;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

/// Parse a polynomial over any scalar ring.
pub fn parse_poly<B: Scalar + Ring>(src: &str) -> Result<PolyM<B>, ParseError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        src,
    };
    let e = p.sum::<B>()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(e)
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn sum<B: Scalar + Ring>(&mut self) -> Result<PolyM<B>, ParseError> {
        let negate_first = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let first = self.term::<B>()?;
        let mut acc = if negate_first { negate(&first) } else { first };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term::<B>()?;
            acc = acc.add(&if c == '-' { negate(&t) } else { t });
        }
        Ok(acc)
    }

    fn term<B: Scalar + Ring>(&mut self) -> Result<PolyM<B>, ParseError> {
        let mut acc = self.power::<B>()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power::<B>()?);
                }
                Some(c) if c == '(' || c.is_alphanumeric() || c == '.' => {
                    acc = acc.mul(&self.power::<B>()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power<B: Scalar + Ring>(&mut self) -> Result<PolyM<B>, ParseError> {
        let base = self.atom::<B>()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let n: u64 = digits.parse().map_err(|_| ParseError {
            column: start + 1,
            message: "expected a nonnegative integer exponent".into(),
        })?;
        Ok(base.pow(n))
    }

    fn atom<B: Scalar + Ring>(&mut self) -> Result<PolyM<B>, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.sum::<B>()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit() || matches!(c, '.' | '/' | 'e' | 'E'))
                {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                let b = B::parse_scalar(&text).map_err(|e| ParseError {
                    column: start + 1,
                    message: e.to_string(),
                })?;
                Ok(PolyM::constant(b))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                Ok(PolyM::var(&name))
            }
            Some(c) => Err(self.error(format!("unexpected {c:?} in {:?}", self.src))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn negate<B: Ring>(p: &PolyM<B>) -> PolyM<B> {
    PolyM(p.0.scaled(&B::one().neg()))
}
