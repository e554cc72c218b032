//! Canonical text form: `a3_111^2 + 768*e - 832`.
//!
//! Terms are printed in decreasing default order; a coefficient is an
//! optionally signed integer or `num/den`, followed by `*`-joined powers.
//! The parser accepts the same language plus parentheses and nonnegative
//! integer powers of arbitrary subexpressions.

use std::fmt;

use super::coeff::{Coeff, CoefficientRing};
use super::monomial::Monomial;
use super::poly::Polynomial;
use super::var::Var;
use crate::error::{Error, Result};
use crate::int::Int;

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, t) in self.terms().iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = if neg { Coeff { num: -&t.coeff.num, den: t.coeff.den.clone() } } else { t.coeff.clone() };
            if t.mon.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", t.mon)?;
            } else {
                write!(f, "{abs}*{}", t.mon)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Polynomial {
    /// Parse the canonical text form (or any expression built from
    /// `+ - * / ^` and parentheses; division only by nonzero constants).
    pub fn parse(ring: CoefficientRing, s: &str) -> Result<Polynomial> {
        let tokens = tokenize(s)?;
        let mut p = Parser { ring, tokens, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("unexpected `{}` in `{s}`", p.tokens[p.pos])));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Int),
    Ident(String),
    Op(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Op(c) => write!(f, "{c}"),
        }
    }
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| Error::Parse(format!("bad number `{lit}`")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    ring: CoefficientRing,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                -self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.power()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                let d = rhs.as_constant().ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = self.divide(&acc, &d)?;
            }
        }
        Ok(acc)
    }

    fn divide(&self, p: &Polynomial, d: &Coeff) -> Result<Polynomial> {
        let r = self.ring;
        let terms = p
            .terms()
            .iter()
            .map(|t| {
                let num = &t.coeff.num * &d.den;
                let den = &t.coeff.den * &d.num;
                r.from_fraction(num, den).map(|c| (t.mon.clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_terms(r, terms))
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Tok::Num(n)) => {
                    let e = n
                        .to_i64()
                        .filter(|&e| (0..=u32::MAX as i64).contains(&e))
                        .ok_or_else(|| Error::Parse(format!("exponent {n} out of range")))?;
                    self.pos += 1;
                    return Ok(base.pow(e as u32));
                }
                _ => return Err(Error::Parse("expected an exponent after `^`".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let r = self.ring;
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(r, r.from_int(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Polynomial::monomial(r, Monomial::var(Var::parse(&name)?), r.one()))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(t) => Err(Error::Parse(format!("unexpected `{t}`"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let z = CoefficientRing::Integers;
        let p = Polynomial::parse(z, "-832 + 768*e + a3_111^2").unwrap();
        assert_eq!(p.to_string(), "a3_111^2 + 768*e - 832");
        assert_eq!(Polynomial::parse(z, "0").unwrap().to_string(), "0");
        assert_eq!(Polynomial::parse(z, "-x*y^2").unwrap().to_string(), "-x*y^2");
    }

    #[test]
    fn rationals() {
        let q = CoefficientRing::Rationals;
        let p = Polynomial::parse(q, "x/2 - 1/3").unwrap();
        assert_eq!(p.to_string(), "1/2*x - 1/3");
        assert_eq!(Polynomial::parse(q, &p.to_string()).unwrap(), p);
        assert!(Polynomial::parse(CoefficientRing::Integers, "x/2").is_err());
    }

    #[test]
    fn errors() {
        let z = CoefficientRing::Integers;
        assert!(Polynomial::parse(z, "x +").is_err());
        assert!(Polynomial::parse(z, "(x").is_err());
        assert!(Polynomial::parse(z, "x/y").is_err());
        assert!(Polynomial::parse(z, "x # y").is_err());
    }
}
