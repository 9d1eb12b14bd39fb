//! Coefficient strings: `p/q` for rationals, `a+b*w` with `w = √−d`.
//! Whitespace is ignored.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{BigRational, QuadElem, QuadField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position} in {input:?}")]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

struct Cursor<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    at: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        let chars = input.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Cursor { input, chars, at: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map(|&(p, _)| p).unwrap_or(self.input.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { input: self.input.to_string(), position: self.pos(), message: message.into() }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.at;
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.at += 1;
        }
        if digits.is_empty() {
            self.at = start;
            return Err(self.error("expected digits"));
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    /// `n`, `n/m`, `n*w`, `n/m*w` or `w`; returns (value, is_w_term).
    fn term(&mut self) -> Result<(BigRational, bool), ParseError> {
        if self.peek() == Some('w') {
            self.bump();
            return Ok((BigRational::one(), true));
        }
        let num = self.integer()?;
        let mut value = BigRational::from_integer(num);
        if self.peek() == Some('/') {
            self.bump();
            let den = self.integer()?;
            if den.is_zero() {
                self.at -= 1;
                return Err(self.error("zero denominator"));
            }
            value /= BigRational::from_integer(den);
        }
        if self.peek() == Some('*') {
            self.bump();
            if self.peek() != Some('w') {
                return Err(self.error("expected `w` after `*`"));
            }
            self.bump();
            return Ok((value, true));
        }
        Ok((value, false))
    }
}

/// Parse a coefficient of `field` in the `a+b*w` grammar.
pub fn parse_coefficient(input: &str, field: QuadField) -> Result<QuadElem, ParseError> {
    let mut cur = Cursor::new(input);
    if cur.peek().is_none() {
        return Err(cur.error("empty coefficient"));
    }
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    let mut first = true;
    while cur.peek().is_some() {
        let mut sign = BigRational::one();
        match cur.peek() {
            Some('+') if !first => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -sign;
            }
            Some('+') => {
                cur.bump();
            }
            Some(_) if !first => return Err(cur.error("expected `+` or `-`")),
            _ => {}
        }
        let w_pos = cur.pos();
        let (value, is_w) = cur.term()?;
        if is_w {
            if field == QuadField::Rational {
                return Err(ParseError {
                    input: input.to_string(),
                    position: w_pos,
                    message: "`w` is not available over Q".into(),
                });
            }
            b += sign * value;
        } else {
            a += sign * value;
        }
        first = false;
    }
    Ok(QuadElem::new(field, a, b).expect("b = 0 over Q"))
}
