//! Recursive-descent parser for the polynomial text format:
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | var | '(' expr ')'
//! var      := 'x' uint
//! rational := uint ('/' uint)?
//! ```
//!
//! Whitespace is ignored. There is no implicit multiplication.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::Zero;

use super::Polynomial;
use crate::error::PolyError;
use crate::rational::Rational;

/// Parses `text` as a polynomial in `nvars` variables `x1..x{nvars}`.
pub fn parse(text: &str, nvars: usize) -> Result<Polynomial, PolyError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            let exp: u32 = digits.parse().map_err(|_| PolyError::Syntax {
                position: start,
                message: "expected a nonnegative exponent".to_string(),
            })?;
            Ok(base.pow(exp))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'x') => {
                let start = self.pos;
                self.pos += 1;
                let digits = self.digits();
                let index: usize = digits.parse().map_err(|_| PolyError::Syntax {
                    position: start,
                    message: "expected a variable index after 'x'".to_string(),
                })?;
                if index == 0 || index > self.nvars {
                    return Err(PolyError::VariableOutOfRange {
                        index,
                        nvars: self.nvars,
                    });
                }
                Ok(Polynomial::var(self.nvars, index - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = Rational::from_integer(num);
                if self.eat(b'/') {
                    self.skip_ws();
                    let at = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(PolyError::Syntax {
                            position: at,
                            message: "zero denominator".to_string(),
                        });
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Polynomial::constant(self.nvars, value))
            }
            Some(_) => Err(self.error("expected a number, variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        digits.parse().map_err(|_| PolyError::Syntax {
            position: start,
            message: "expected digits".to_string(),
        })
    }
}
