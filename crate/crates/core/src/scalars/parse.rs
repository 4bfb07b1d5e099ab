//! Text grammar for polynomial coefficients.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/') power)*
//! power  := atom ['^' ['-'] INT]
//! atom   := NUMBER | IDENT | '(' expr ')'
//! ```
//! Identifiers match `[A-Za-z][A-Za-z0-9_]*`. Division is only allowed by
//! monomials, which keeps the result a Laurent polynomial.

use super::{parse_rational, Coeff, Poly};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column inside the parsed string.
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.pos + 1, message: message.into() })
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

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if neg { -first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power()?;
                    match d.try_inv() {
                        Some(inv) => acc = acc * inv,
                        None => {
                            return Err(ParseError {
                                column: at + 1,
                                message: "division only by a nonzero monomial".into(),
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let mut neg = false;
        if self.peek() == Some(b'-') {
            neg = true;
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer exponent");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let n: u32 = match text.parse() {
            Ok(n) if n <= 64 => n,
            _ => {
                self.pos = start;
                return self.err("exponent too large");
            }
        };
        if neg {
            match base.try_inv() {
                Some(inv) => Ok(inv.pow_u(n)),
                None => {
                    self.pos = start;
                    self.err("negative exponent needs a nonzero monomial base")
                }
            }
        } else {
            Ok(base.pow_u(n))
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match parse_rational(text) {
                    Some(q) => Ok(Poly::constant(q)),
                    None => {
                        self.pos = start;
                        self.err(format!("malformed number '{text}'"))
                    }
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Poly::var(name))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse a polynomial such as `-3*r^2 + a/r`.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    if !text.is_ascii() {
        let column = text.chars().position(|c| !c.is_ascii()).unwrap_or(0) + 1;
        return Err(ParseError { column, message: "non-ASCII character".into() });
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn parses_family_coefficients() {
        let p = parse_poly("-3*r^2").unwrap();
        assert_eq!(p, Poly::monomial(rat(-3, 1), &[("r", 2)]));
        let q = parse_poly("a^2*(r^2+a^2)/(2*r^2)").unwrap();
        let expect = Poly::monomial(rat(1, 2), &[("a", 4), ("r", -2)]) + Poly::monomial(rat(1, 2), &[("a", 2)]);
        assert_eq!(q, expect);
        assert_eq!(parse_poly("3/5").unwrap(), Poly::constant(rat(3, 5)));
        assert_eq!(parse_poly("r^-1").unwrap(), Poly::var("r").try_inv().unwrap());
    }

    #[test]
    fn display_round_trips() {
        for s in ["-3*r^2 + a*r^-1 + 1", "1/2*B12^2 - 3/7*C13*A", "0", "-1"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn reports_columns() {
        let e = parse_poly("3*r + $").unwrap_err();
        assert_eq!(e.column, 7);
        let e = parse_poly("r/(1+r)").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_poly("(r").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse_poly("r^").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("1.2.3").is_err());
    }
}
