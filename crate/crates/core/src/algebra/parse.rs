//! Small expression parser for exact rational functions in `x` and `y`.
//!
//! Accepts `+ - * / ^`, parentheses, integer and decimal literals, the
//! variables `x`, `y` and named parameters. Juxtaposition multiplies, so
//! `2x` and `(1-x)y` both parse. Exponents must be integer literals.

use std::collections::BTreeMap;

use super::{Poly2, RatFn2};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Q};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = src.chars().collect();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let s = k;
            while k < cs.len() && (cs[k].is_ascii_digit() || cs[k] == '.') {
                k += 1;
            }
            out.push(Tok::Num(cs[s..k].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let s = k;
            while k < cs.len() && (cs[k].is_alphanumeric() || cs[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(cs[s..k].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            k += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in '{src}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    params: &'a BTreeMap<String, Q>,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in '{}'", self.pos, self.src))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFn2<Q>> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn2<Q>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = acc.div(&d)?;
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFn2<Q>> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFn2<Q>> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e: u32 = match self.peek() {
            Some(Tok::Num(s)) => s.parse().map_err(|_| self.err("integer exponent expected"))?,
            _ => return Err(self.err("integer exponent expected")),
        };
        self.pos += 1;
        let r = base.pow(e);
        if neg {
            r.inv()
        } else {
            Ok(r)
        }
    }

    fn primary(&mut self) -> Result<RatFn2<Q>> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(RatFn2::constant(parse_rational(&s)?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "x" => Ok(Poly2::x().into()),
                    "y" => Ok(Poly2::y().into()),
                    _ => self
                        .params
                        .get(&name)
                        .map(|v| RatFn2::constant(v.clone()))
                        .ok_or_else(|| Error::Parse(format!("unknown symbol '{name}' in '{}'", self.src))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("unexpected end or operator")),
        }
    }
}

/// Parses an expression into a canonical rational function.
pub fn parse_ratfn(src: &str, params: &BTreeMap<String, Q>) -> Result<RatFn2<Q>> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        params,
        src,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses an expression that must be a polynomial.
pub fn parse_poly(src: &str, params: &BTreeMap<String, Q>) -> Result<Poly2<Q>> {
    parse_ratfn(src, params)?
        .to_poly()
        .ok_or_else(|| Error::Parse(format!("'{src}' is not a polynomial")))
}
