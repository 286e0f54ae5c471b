//! Text form of polynomials.
//!
//! ```text
//! poly  := term (('+'|'-') term)*
//! term  := int? sym ('^' int)? ('*' sym ('^' int)?)*
//! sym   := ('Q'|'Y'|'h') '[' int ']' ('(' 'u' shift ')')?
//! shift := (('+'|'-') rational 't'?)*
//! ```
//!
//! `h` symbols take no argument. Printing emits the canonical form, so
//! `parse(print(p)) == p` and `print(parse(s))` is the canonical spelling.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{LaurentPoly, Monomial};
use crate::shift::{Family, Shift};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

pub(super) fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    if m.is_one() {
        return f.write_str("1");
    }
    let mut first = true;
    for (s, e) in m.symbols() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        let tag = match s.family() {
            Family::Q => 'Q',
            Family::Y => 'Y',
        };
        write!(f, "{tag}[{}]({})", s.index(), s.shift())?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    for (a, e) in m.units() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "h[{a}]")?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

pub(super) fn write_poly(f: &mut fmt::Formatter<'_>, p: &LaurentPoly) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (i, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let abs = c.abs();
        if m.is_one() {
            write!(f, "{abs}")?;
        } else {
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            write_monomial(f, m)?;
        }
    }
    Ok(())
}

pub fn print_poly(p: &LaurentPoly) -> String {
    p.to_string()
}

pub fn parse_poly(text: &str) -> Result<LaurentPoly, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    parser.poly()
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected `{c}`, found `{found}`")),
                None => self.error(format!("expected `{c}`, found end of input")),
            }
        }
    }

    /// `+1`, `-1`, or `None` when no sign is present.
    fn sign(&mut self) -> Option<i64> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(1)
            }
            Some('-') | Some('\u{2212}') => {
                self.pos += 1;
                Some(-1)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let sign = self.sign().unwrap_or(1);
        match self.digits() {
            Some(d) => Ok(d * sign),
            None => self.error("expected an integer"),
        }
    }

    fn poly(&mut self) -> Result<LaurentPoly, ParseError> {
        self.skip_ws();
        if self.peek().is_none() {
            return self.error("empty input");
        }
        let mut sign = self.sign().unwrap_or(1);
        let mut acc = LaurentPoly::zero();
        loop {
            self.skip_ws();
            let term = self.term()?;
            acc += &term.scale_i64(sign);
            self.skip_ws();
            match self.sign() {
                Some(s) => sign = s,
                None => break,
            }
        }
        if let Some(c) = self.peek() {
            return self.error(format!("unexpected `{c}`"));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let coeff = self.digits();
        self.skip_ws();
        let starts_symbol = matches!(self.peek(), Some('Q' | 'Y' | 'h'));
        let mut m = Monomial::one();
        match (&coeff, starts_symbol) {
            (None, false) => return self.error("expected a coefficient or a symbol"),
            (Some(_), false) => {
                if self.eat('*') {
                    self.skip_ws();
                    self.factor(&mut m)?;
                }
            }
            (_, true) => self.factor(&mut m)?,
        }
        loop {
            self.skip_ws();
            if !self.eat('*') {
                break;
            }
            self.skip_ws();
            self.factor(&mut m)?;
        }
        Ok(LaurentPoly::from_term(m, coeff.unwrap_or_else(BigInt::one)))
    }

    fn factor(&mut self, m: &mut Monomial) -> Result<(), ParseError> {
        let tag = match self.peek() {
            Some(c @ ('Q' | 'Y' | 'h')) => {
                self.pos += 1;
                c
            }
            Some(c) => return self.error(format!("expected Q, Y or h, found `{c}`")),
            None => return self.error("expected Q, Y or h, found end of input"),
        };
        self.expect('[')?;
        let index = match self.digits().and_then(|d| u32::try_from(d).ok()) {
            Some(i) => i,
            None => return self.error("expected a symbol index"),
        };
        self.expect(']')?;
        let shift = if tag != 'h' && self.eat('(') {
            self.skip_ws();
            self.expect('u')?;
            let s = self.shift_text()?;
            self.skip_ws();
            self.expect(')')?;
            s
        } else {
            Shift::zero()
        };
        let exponent = if self.eat('^') {
            let e = self.integer()?;
            match i64::try_from(e) {
                Ok(e) => e,
                Err(_) => return self.error("exponent out of range"),
            }
        } else {
            1
        };
        match tag {
            'Q' => m.push(Family::Q, index, &shift, exponent),
            'Y' => m.push(Family::Y, index, &shift, exponent),
            _ => m.push_unit(index, exponent),
        }
        Ok(())
    }

    fn shift_text(&mut self) -> Result<Shift, ParseError> {
        let mut p = BigRational::zero();
        let mut q = BigRational::zero();
        loop {
            self.skip_ws();
            let Some(sign) = self.sign() else { break };
            self.skip_ws();
            let value = if self.peek() == Some('t') {
                BigRational::one()
            } else {
                let num = match self.digits() {
                    Some(d) => d,
                    None => return self.error("expected a number in the shift"),
                };
                let den = if self.eat('/') {
                    match self.digits() {
                        Some(d) if !d.is_zero() => d,
                        _ => return self.error("expected a nonzero denominator"),
                    }
                } else {
                    BigInt::one()
                };
                BigRational::new(num, den)
            };
            let value = value * BigInt::from(sign);
            if self.eat('t') {
                q += value;
            } else {
                p += value;
            }
        }
        Ok(Shift::new(p, q))
    }
}
