//! Exact rational scalars and their textual form.
//!
//! Values are written as reduced fractions `p/q`, or just `p` when the
//! denominator is one. The same syntax is accepted back by [`parse_rational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactScalar = BigRational;

pub fn int(n: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> ExactScalar {
    ExactScalar::new(BigInt::from(p), BigInt::from(q))
}

/// `base^exp` with the convention `0^0 = 1`.
pub fn pow(base: &ExactScalar, exp: usize) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn format_rational(v: &ExactScalar) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Nearest `f64`; saturates to infinity when out of range.
pub fn to_f64(v: &ExactScalar) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        if v.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `integer | integer "/" positive-integer`, with the whole string
/// required to match. Whitespace around the value is ignored.
pub fn parse_rational(text: &str) -> Result<ExactScalar> {
    let mut cursor = Cursor::new(text);
    cursor.skip_ws();
    let value = cursor.rational()?;
    cursor.skip_ws();
    cursor.expect_end()?;
    Ok(value)
}

/// Byte cursor shared by the rational and distribution parsers.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    pub(crate) fn eat(&mut self, token: &str) -> bool {
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected digits");
        }
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let negative = self.eat("-");
        let magnitude = self.digits()?;
        Ok(if negative { -magnitude } else { magnitude })
    }

    pub(crate) fn natural(&mut self) -> Result<usize> {
        self.skip_ws();
        let at = self.pos;
        let value = self.digits()?;
        value.to_usize().ok_or(Error::Syntax {
            position: at,
            message: "integer too large".into(),
        })
    }

    pub(crate) fn rational(&mut self) -> Result<ExactScalar> {
        let numer = self.integer()?;
        if !self.eat("/") {
            return Ok(ExactScalar::from_integer(numer));
        }
        let at = self.pos;
        let denom = self.digits()?;
        if denom.is_zero() {
            return Err(Error::Syntax {
                position: at,
                message: "denominator must be positive".into(),
            });
        }
        Ok(ExactScalar::new(numer, denom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_rational(&int(-7)), "-7");
        assert_eq!(format_rational(&ratio(4, 6)), "2/3");
        assert_eq!(format_rational(&ratio(3, -9)), "-1/3");
    }

    #[test]
    fn parses_reduced_and_unreduced() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational(" -1/3 ").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("0").unwrap(), int(0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("2/").is_err());
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(pow(&int(0), 0), int(1));
        assert_eq!(pow(&int(0), 3), int(0));
        assert_eq!(pow(&ratio(-1, 2), 3), ratio(-1, 8));
    }
}
