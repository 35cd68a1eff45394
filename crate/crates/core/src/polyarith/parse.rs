//! Polynomial text input.
//!
//! [`parse_poly`] accepts exactly the sum-of-terms grammar
//!
//! ```text
//! poly   := ['-'] term (('+'|'-') term)*
//! term   := coeff ['*' mono] | mono
//! coeff  := int | int '/' posint
//! mono   := factor ['*' factor]
//! factor := ('x'|'y') ['^' nonneg]
//! ```
//!
//! and [`parse_expr`] additionally allows parentheses, powers of groups, products and
//! division by constants, e.g. `x + (y + x^2)^2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly2::{Monomial, Poly2};
use super::rational::Rational;

pub const DEFAULT_EXPONENT_CAP: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at byte {}", self.message, self.offset)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Largest exponent allowed per variable.
    pub exponent_cap: u32,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            exponent_cap: DEFAULT_EXPONENT_CAP,
        }
    }
}

pub fn parse_poly(text: &str) -> Result<Poly2, ParseError> {
    parse_poly_with(text, ParseOptions::default())
}

pub fn parse_poly_with(text: &str, opts: ParseOptions) -> Result<Poly2, ParseError> {
    let mut p = Parser::new(text, opts);
    let out = p.strict_poly()?;
    p.expect_end()?;
    Ok(out)
}

pub fn parse_expr(text: &str) -> Result<Poly2, ParseError> {
    parse_expr_with(text, ParseOptions::default())
}

pub fn parse_expr_with(text: &str, opts: ParseOptions) -> Result<Poly2, ParseError> {
    let mut p = Parser::new(text, opts);
    let out = p.expr()?;
    p.expect_end()?;
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    opts: ParseOptions,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, opts: ParseOptions) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            opts,
        }
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset,
            message: message.into(),
        })
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

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
        }
    }

    fn unsigned_int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let e = self.unsigned_int()?;
        match u32::try_from(&e) {
            Ok(v) if v <= self.opts.exponent_cap => Ok(v),
            _ => self.err(
                at,
                format!("exponent exceeds cap {}", self.opts.exponent_cap),
            ),
        }
    }

    fn is_start_of_factor(&mut self) -> bool {
        matches!(self.peek(), Some(b'x') | Some(b'y'))
    }

    // ---- strict grammar ----

    fn strict_poly(&mut self) -> Result<Poly2, ParseError> {
        let mut acc = Poly2::zero();
        let neg = self.eat(b'-');
        let t = self.strict_term()?;
        acc = &acc + &if neg { -t } else { t };
        loop {
            let neg = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => break,
            };
            self.pos += 1;
            let t = self.strict_term()?;
            acc = &acc + &if neg { -t } else { t };
        }
        Ok(acc)
    }

    fn strict_term(&mut self) -> Result<Poly2, ParseError> {
        if self.is_start_of_factor() {
            let m = self.strict_mono()?;
            return Ok(Poly2::monomial(Rational::one(), m.i, m.j));
        }
        let c = self.strict_coeff()?;
        if self.eat(b'*') {
            let m = self.strict_mono()?;
            return Ok(Poly2::monomial(c, m.i, m.j));
        }
        Ok(Poly2::constant(c))
    }

    fn strict_coeff(&mut self) -> Result<Rational, ParseError> {
        let n = self.unsigned_int()?;
        if self.eat(b'/') {
            self.skip_ws();
            let at = self.pos;
            let d = self.unsigned_int()?;
            if d.is_zero() {
                return self.err(at, "zero denominator");
            }
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::from_integer(n))
    }

    fn strict_mono(&mut self) -> Result<Monomial, ParseError> {
        let (v, e) = self.strict_factor()?;
        let mut m = Monomial::new(0, 0);
        set_var(&mut m, v, e);
        if self.peek() == Some(b'*') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let (w, e2) = self.strict_factor()?;
            if w == v {
                return self.err(at, format!("duplicate variable '{}'", w as char));
            }
            set_var(&mut m, w, e2);
        }
        Ok(m)
    }

    fn strict_factor(&mut self) -> Result<(u8, u32), ParseError> {
        let at = self.pos;
        let v = match self.peek() {
            Some(c @ (b'x' | b'y')) => c,
            _ => return self.err(self.pos.max(at), "expected 'x' or 'y'"),
        };
        self.pos += 1;
        let e = if self.eat(b'^') { self.exponent()? } else { 1 };
        Ok((v, e))
    }

    // ---- extended grammar ----

    fn expr(&mut self) -> Result<Poly2, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.product()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            let neg = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => break,
            };
            self.pos += 1;
            let t = self.product()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Poly2, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                    self.check_cap(&acc, at)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let rhs = self.power()?;
                    if !rhs.is_constant() || rhs.is_zero() {
                        return self.err(at, "division only by a nonzero constant");
                    }
                    acc = acc.scale(&rhs.constant_term().recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly2, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let e = self.exponent()?;
            let out = base.pow(e);
            self.check_cap(&out, at)?;
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly2, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err(self.pos, "expected ')'");
                }
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Poly2::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Poly2::y())
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly2::constant(Rational::from_integer(
                self.unsigned_int()?,
            ))),
            _ => self.err(self.pos, "expected term"),
        }
    }

    fn check_cap(&self, p: &Poly2, at: usize) -> Result<(), ParseError> {
        let cap = self.opts.exponent_cap;
        if p.monomials().any(|m| m.i > cap || m.j > cap) {
            return self.err(at, format!("exponent exceeds cap {cap}"));
        }
        Ok(())
    }
}

fn set_var(m: &mut Monomial, v: u8, e: u32) {
    if v == b'x' {
        m.i = e;
    } else {
        m.j = e;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::rational::{int, rat};

    #[test]
    fn literal_terms() {
        let p = parse_poly("x^2*y^3 - 2*x*y^2 + y").unwrap();
        assert_eq!(p.coeff_of(2, 3), int(1));
        assert_eq!(p.coeff_of(1, 2), int(-2));
        assert_eq!(p.coeff_of(0, 1), int(1));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn cancellation_and_merge() {
        assert!(parse_poly("x - x").unwrap().is_zero());
        let p = parse_poly("1/2*x + 1/2*x").unwrap();
        assert_eq!(p, Poly2::x());
        assert_eq!(parse_poly(" - 3/6 * y ^ 2").unwrap().coeff_of(0, 2), rat(-1, 2));
    }

    #[test]
    fn strict_rejections() {
        assert_eq!(parse_poly("x+").unwrap_err().offset, 2);
        assert!(parse_poly("x*x").unwrap_err().message.contains("duplicate"));
        assert!(parse_poly("x^65").is_err());
        assert!(parse_poly("x^64").is_ok());
        assert!(parse_poly("(x+y)^2").is_err());
        assert!(parse_poly("2*3").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x*y*x").is_err());
    }

    #[test]
    fn configurable_cap() {
        let opts = ParseOptions { exponent_cap: 3 };
        assert!(parse_poly_with("x^3", opts).is_ok());
        assert!(parse_poly_with("x^4", opts).is_err());
        assert!(parse_expr_with("(x^2)^2", opts).is_err());
    }

    #[test]
    fn extended_expressions() {
        let f = parse_expr("x+(y+x^2)^2").unwrap();
        assert_eq!(f, parse_poly("x + y^2 + 2*x^2*y + x^4").unwrap());
        assert_eq!(parse_expr("-(x - y)*2/4").unwrap(), parse_poly("-1/2*x + 1/2*y").unwrap());
        assert!(parse_expr("x/y").is_err());
        assert!(parse_expr("(x").is_err());
    }
}
