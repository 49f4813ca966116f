//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-'|'+') factor | atom ('^' uint)?
//! atom   := uint 'i'? | 'i' | variable | '(' expr ')'
//! ```
//!
//! Coefficients are exact: `3`, `1/2`, `2i`, `(1+2i)/3`. Division requires a
//! nonzero constant divisor. Implicit multiplication is rejected; whitespace
//! is insignificant. The result must be homogeneous.

use super::{GaussianRational, HomoPoly, MPoly, PolyError};

pub fn parse(text: &str, variables: &[&str]) -> Result<HomoPoly, PolyError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        vars: variables,
    };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    HomoPoly::try_new(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                self.skip_ws();
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                acc = acc.mul(&self.factor()?);
            } else if self.eat(b'/') {
                self.skip_ws();
                let start = self.pos;
                let rhs = self.factor()?;
                match rhs.constant_value() {
                    Some(c) => {
                        let inv = c.inverse().ok_or_else(|| PolyError::Syntax {
                            position: start,
                            message: "division by zero".into(),
                        })?;
                        acc = acc.scale(&inv);
                    }
                    None => {
                        return Err(PolyError::Syntax {
                            position: start,
                            message: "division by a non-constant polynomial".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        self.skip_ws();
        if self.eat(b'-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat(b'+') {
            return self.factor();
        }
        let base = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            if e > 100_000 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        self.skip_ws();
        let nvars = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                let coeff = if self.eat(b'i') {
                    &GaussianRational::from_int(n as i64) * &GaussianRational::i()
                } else {
                    GaussianRational::from_int(n as i64)
                };
                Ok(MPoly::constant(nvars, coeff))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let ident = self.ident();
                if ident == "i" {
                    return Ok(MPoly::constant(nvars, GaussianRational::i()));
                }
                match self.vars.iter().position(|v| *v == ident) {
                    Some(idx) => Ok(MPoly::variable(nvars, idx)),
                    None => {
                        self.pos -= ident.len();
                        Err(self.err(&format!("unknown variable `{ident}`")))
                    }
                }
            }
            _ => Err(self.err("expected a number, variable, 'i' or '('")),
        }
    }

    fn uint(&mut self) -> Result<u32, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| PolyError::Syntax {
                position: start,
                message: "integer too large".into(),
            })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }
}
