//! ```text
//! expr   := term { "+" term }
//! term   := power { ("*" | "/") power }
//! power  := atom [ "^" int ]
//! atom   := int | "z" | "Z" | "(" expr ")"
//!         | ("Q" | "L" | "E" | "E1" | "Poly") "(" expr ")"
//!         | "Pow" "(" expr "," int ")"
//! ```
//! Division is only by constants. `Poly(..)` insists on a polynomial body
//! and collapses it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AsymptError, EExpr};
use crate::poly::QPoly;

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip();
        self.chars.get(self.pos).copied()
    }

    fn err<T>(&self, message: String) -> Result<T, AsymptError> {
        Err(AsymptError::Syntax { column: self.pos + 1, message })
    }

    fn eat(&mut self, c: char) -> Result<(), AsymptError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn int(&mut self) -> Result<BigInt, AsymptError> {
        self.skip();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer".into());
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn small(&mut self) -> Result<u32, AsymptError> {
        let k = self.int()?;
        u32::try_from(k).or_else(|_| self.err("exponent too large".into()))
    }

    fn expr(&mut self) -> Result<EExpr, AsymptError> {
        let mut e = self.term()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            e = EExpr::plus(e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<EExpr, AsymptError> {
        let mut e = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    e = EExpr::times(e, self.power()?);
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = match d.as_poly() {
                        Some(p) if p.degree() == Some(0) => p.coeff(0),
                        _ => return self.err("division only by a nonzero constant".into()),
                    };
                    e = EExpr::times(e, EExpr::Poly(QPoly::constant(BigRational::from_integer(1.into()) / c)));
                }
                _ => return Ok(e),
            }
        }
    }

    fn power(&mut self) -> Result<EExpr, AsymptError> {
        let a = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.small()?;
            if k == 0 {
                return Ok(EExpr::constant(1));
            }
            return Ok(EExpr::pow(a, k));
        }
        Ok(a)
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<EExpr, AsymptError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(EExpr::Poly(QPoly::constant(BigRational::from_integer(self.int()?)))),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.eat(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.name();
                if name == "z" || name == "Z" {
                    return Ok(EExpr::Z);
                }
                self.eat('(')?;
                let arg = self.expr()?;
                let e = match name.as_str() {
                    "Q" => EExpr::q(arg),
                    "L" => EExpr::l(arg),
                    "E" => EExpr::e(arg),
                    "E1" => EExpr::e1(arg),
                    "Poly" => match arg.as_poly() {
                        Some(p) => EExpr::Poly(p),
                        None => return self.err("Poly needs a polynomial".into()),
                    },
                    "Pow" => {
                        self.eat(',')?;
                        let k = self.small()?;
                        if k == 0 {
                            return Err(AsymptError::ZeroPower);
                        }
                        EExpr::pow(arg, k)
                    }
                    _ => return self.err(format!("unknown operator `{name}`")),
                };
                self.eat(')')?;
                Ok(e)
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input".into()),
        }
    }
}

/// Parse and validate an expression such as `Q(E1(z))` or
/// `E(Poly(z + z^2/2))`.
pub fn parse_eexpr(text: &str) -> Result<EExpr, AsymptError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input".into());
    }
    e.validate()?;
    Ok(e)
}
