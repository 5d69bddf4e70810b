//! Recursive-descent parser for the ordinal expression grammar:
//!
//! ```text
//! expr := term ("+" term)*
//! term := atom ("*" nat)?
//! atom := "0" | nat | "w" | "w^" atom | "w^(" expr ")"
//! ```
//!
//! Whitespace is insignificant. Values are built with [`Ordinal::add`] and
//! [`Ordinal::mul`], so non-normal input like `1+w` normalizes for free.

use super::Ordinal;
use num_bigint::BigUint;
use std::fmt;

/// Syntax error with the byte offset of the offending position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseOrdinalError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseOrdinalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseOrdinalError {}

pub fn parse_ordinal(text: &str) -> Result<Ordinal, ParseOrdinalError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseOrdinalError {
        ParseOrdinalError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
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

    fn expr(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let atom = self.atom()?;
        if self.eat(b'*') {
            let n = self.nat()?;
            Ok(atom.mul(&Ordinal::from_nat(n)))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                if self.eat(b'^') {
                    let exp = if self.eat(b'(') {
                        let e = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.error("expected `)`"));
                        }
                        e
                    } else {
                        self.atom()?
                    };
                    Ok(Ordinal::omega_pow(exp))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some(b) if b.is_ascii_digit() => {
                let n = self.nat()?;
                Ok(Ordinal::from_nat(n))
            }
            _ => Err(self.error("expected `w`, a natural number, or `(`-expression")),
        }
    }

    fn nat(&mut self) -> Result<BigUint, ParseOrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn denotation() {
        let o = parse_ordinal("w^(w+1)*3+w*2+7").unwrap();
        let terms: Vec<_> = o.terms().collect();
        assert_eq!(terms.len(), 3);
        assert_eq!(*terms[0].0, parse_ordinal("w+1").unwrap());
        assert_eq!(*terms[0].1, 3u32.into());
        assert_eq!(*terms[1].0, Ordinal::one());
        assert_eq!(*terms[1].1, 2u32.into());
        assert!(terms[2].0.is_zero());
        assert_eq!(*terms[2].1, 7u32.into());
    }

    #[test]
    fn normalizes_non_normal_sums() {
        assert_eq!(parse_ordinal("1+w").unwrap(), Ordinal::omega());
        assert_eq!(
            parse_ordinal("w+w").unwrap(),
            parse_ordinal("w*2").unwrap()
        );
        assert_eq!(parse_ordinal("w^0").unwrap(), Ordinal::one());
        assert_eq!(parse_ordinal("w*0").unwrap(), Ordinal::zero());
    }

    #[test]
    fn error_positions() {
        let err = parse_ordinal("w^").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse_ordinal("w^(w+1").unwrap_err();
        assert_eq!(err.offset, 6);
        let err = parse_ordinal("3+").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(parse_ordinal("").is_err());
        assert!(parse_ordinal("x").is_err());
        assert!(parse_ordinal("w 2").is_err());
    }

    #[test]
    fn whitespace_insignificant() {
        assert_eq!(
            parse_ordinal(" w ^ ( w + 1 ) * 3 ").unwrap(),
            parse_ordinal("w^(w+1)*3").unwrap()
        );
    }
}
