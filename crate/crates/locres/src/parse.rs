//! Polynomial expression parser: integers, variable names, `+ - * / ^` and
//! parentheses. Division is only allowed by nonzero constants.

use num_bigint::BigInt;

use crate::coeffring::{Field, RingSpec};
use crate::error::{Error, Result};
use crate::poly::Poly;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    ring: &'a RingSpec,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        col: pos + 1,
        msg: msg.into(),
    }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, self.ring);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?, self.ring);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?, self.ring);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(err(at, "division by a non-constant or zero"));
                    }
                    acc = acc.scale(&d.terms()[0].1.inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| err(at, "exponent out of range"))?;
            if e > 4096 {
                return Err(err(at, "exponent out of range"));
            }
            return Ok(base.pow(e, self.ring));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, "expected an integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse::<BigInt>().unwrap())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(err(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let n = self.integer()?;
                if let Field::Prime(p) = self.ring.field {
                    if n != BigInt::from(0) && (&n % BigInt::from(p)) == BigInt::from(0) {
                        return Err(err(at, format!("constant {n} vanishes modulo {p}")));
                    }
                }
                Ok(Poly::constant(self.ring.field.from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match self.ring.names.iter().position(|v| v == name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(err(start, format!("undeclared variable {name}"))),
                }
            }
            Some(c) => Err(err(self.pos, format!("unexpected character '{}'", c as char))),
            None => Err(err(self.pos, "unexpected end of input")),
        }
    }
}

/// Parses a polynomial over `ring`.
pub fn parse_poly(s: &str, ring: &RingSpec) -> Result<Poly> {
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
        ring,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(err(p.pos, "trailing input"));
    }
    Ok(out)
}

/// Parses a list of polynomials.
pub fn parse_polys(items: &[&str], ring: &RingSpec) -> Result<Vec<Poly>> {
    items.iter().map(|s| parse_poly(s, ring)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let r = RingSpec::q(&["x", "y"]);
        let p = parse_poly("(x+y)^2 - 2*x*y", &r).unwrap();
        assert_eq!(p, parse_poly("x^2+y^2", &r).unwrap());
        assert!(parse_poly("x+z", &r).is_err());
        assert!(parse_poly("x/(y)", &r).is_err());
        assert!(parse_poly("x +", &r).is_err());
        let r7 = RingSpec::new(&["x"], 1, Field::Prime(7)).unwrap();
        assert!(parse_poly("14*x", &r7).is_err());
        assert!(parse_poly("3*x", &r7).is_ok());
    }
}
