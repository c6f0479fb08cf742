//! Text grammar for polynomials.
//!
//! ```text
//! poly   := term (("+" | "-") term)*
//! term   := [sign] [coeff] ["*"] factor*
//! coeff  := integer | integer "/" integer
//! factor := var ["^" nat]          (factors may also be joined by "*")
//! var    := x | y | a | b
//! ```
//!
//! Whitespace is ignored everywhere.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{Monomial, Poly, Var};
use super::rational::Rational;
use crate::error::Error;

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Parser { chars, at: 0, src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.src.len(), |&(i, _)| i)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.at;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return None;
        }
        let s: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        s.parse().ok()
    }

    fn poly(&mut self) -> Result<Poly, Error> {
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut out = Poly::zero();
        let mut first = true;
        while self.peek().is_some() {
            let neg = match self.peek() {
                Some('+') => {
                    self.bump();
                    false
                }
                Some('-') => {
                    self.bump();
                    true
                }
                _ if first => false,
                Some(c) => return Err(self.err(format!("expected '+' or '-', found {c:?}"))),
                None => unreachable!(),
            };
            first = false;
            let (m, c) = self.term()?;
            out.add_term(m, if neg { -c } else { c });
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational), Error> {
        let start = self.at;
        let mut coeff = Rational::one();
        if let Some(n) = self.digits() {
            coeff = Rational::from_integer(n);
            if self.peek() == Some('/') {
                self.bump();
                let d = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                if d.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                coeff = Rational::new(coeff.to_integer(), d);
            }
        }
        let mut mono = Monomial::ONE;
        loop {
            match self.peek() {
                Some('*') => {
                    if self.at == start {
                        return Err(self.err("'*' needs a factor on its left"));
                    }
                    self.bump();
                    if !matches!(self.peek(), Some(c) if Var::from_symbol(c).is_some()) {
                        return Err(self.err("expected variable after '*'"));
                    }
                }
                Some(c) if Var::from_symbol(c).is_some() => {
                    self.bump();
                    let v = Var::from_symbol(c).unwrap();
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.bump();
                        let n = self.digits().ok_or_else(|| self.err("expected exponent"))?;
                        e = u32::try_from(n).map_err(|_| self.err("exponent too large"))?;
                    }
                    mono.0[v.index()] += e;
                }
                Some('+') | Some('-') | None => break,
                Some(c) => return Err(self.err(format!("unexpected character {c:?}"))),
            }
        }
        if self.at == start {
            return Err(self.err("expected a term"));
        }
        Ok((mono, coeff))
    }
}

pub fn parse_poly(src: &str) -> Result<Poly, Error> {
    Parser::new(src).poly()
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}
