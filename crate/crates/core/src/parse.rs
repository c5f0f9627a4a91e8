//! Polynomial text parser.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! poly   := term (("+"|"-") term)* ;
//! term   := [sign] (coeff ["*" monos] | monos) ;
//! coeff  := integer ["/" positive-integer] ;
//! monos  := mono ("*" mono)* ;
//! mono   := ("x"|"y"|"t1"|"t2") ["^" nonnegative-integer] ;
//! ```
//!
//! `t1` aliases `x` and `t2` aliases `y`. Parsing is total on the grammar
//! and collects like terms into canonical form.

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::Poly2;
use crate::rat::Rat;

/// Parse failure, with the byte offset of the offending input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("parse error at byte {offset}: {message}")]
    Malformed { offset: usize, message: String },
    #[error("invalid exponent at byte {offset}: {message}")]
    Exponent { offset: usize, message: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Malformed { offset, .. } | ParseError::Exponent { offset, .. } => *offset,
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
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

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Malformed {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn exp_err(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::Exponent {
            offset,
            message: message.into(),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn coeff(&mut self) -> Result<Rat, ParseError> {
        let num = self.integer()?;
        if self.eat(b'/') {
            self.skip_ws();
            let den_at = self.pos;
            let den = self.integer()?;
            if den == BigInt::from(0) {
                return Err(ParseError::Malformed {
                    offset: den_at,
                    message: "zero denominator".into(),
                });
            }
            Ok(Rat::from_big(num, den))
        } else {
            Ok(Rat::from_big(num, BigInt::one()))
        }
    }

    /// One variable power: (x|y|t1|t2) ["^" nonnegative-integer].
    fn mono(&mut self) -> Result<(u32, u32), ParseError> {
        self.skip_ws();
        let var_at = self.pos;
        let is_x = match self.bytes.get(self.pos).copied() {
            Some(b'x') => {
                self.pos += 1;
                true
            }
            Some(b'y') => {
                self.pos += 1;
                false
            }
            Some(b't') => {
                self.pos += 1;
                match self.bytes.get(self.pos) {
                    Some(b'1') => {
                        self.pos += 1;
                        true
                    }
                    Some(b'2') => {
                        self.pos += 1;
                        false
                    }
                    _ => {
                        return Err(ParseError::Malformed {
                            offset: var_at,
                            message: "expected t1 or t2".into(),
                        })
                    }
                }
            }
            _ => {
                return Err(ParseError::Malformed {
                    offset: var_at,
                    message: "expected variable".into(),
                })
            }
        };
        let mut exp: u32 = 1;
        if self.eat(b'^') {
            self.skip_ws();
            let exp_at = self.pos;
            if self.peek() == Some(b'-') {
                return Err(self.exp_err(exp_at, "negative exponents are not allowed"));
            }
            let e = self.integer()?;
            if self.bytes.get(self.pos) == Some(&b'/') {
                return Err(self.exp_err(self.pos, "fractional exponents are not allowed"));
            }
            exp = u32::try_from(&e).map_err(|_| self.exp_err(exp_at, "exponent out of range"))?;
        }
        Ok(if is_x { (exp, 0) } else { (0, exp) })
    }

    /// mono ("*" mono)*, returning combined (x, y) exponents.
    fn monos(&mut self) -> Result<(u32, u32), ParseError> {
        let (mut a, mut b) = self.mono()?;
        loop {
            let save = self.pos;
            if !self.eat(b'*') {
                break;
            }
            match self.peek() {
                Some(b'x') | Some(b'y') | Some(b't') => {
                    let (da, db) = self.mono()?;
                    a += da;
                    b += db;
                }
                _ => {
                    // the "*" belonged to something else; not valid after monos
                    self.pos = save;
                    break;
                }
            }
        }
        Ok((a, b))
    }

    fn term(&mut self) -> Result<(Rat, u32, u32), ParseError> {
        let mut sign = Rat::one();
        while let Some(b) = self.peek() {
            match b {
                b'+' => {
                    self.pos += 1;
                }
                b'-' => {
                    self.pos += 1;
                    sign = -sign;
                }
                _ => break,
            }
        }
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let c = self.coeff()?;
                if self.eat(b'*') {
                    let (a, bb) = self.monos()?;
                    Ok((sign * c, a, bb))
                } else {
                    Ok((sign * c, 0, 0))
                }
            }
            Some(b'x') | Some(b'y') | Some(b't') => {
                let (a, bb) = self.monos()?;
                Ok((sign, a, bb))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Parses the grammar above into a canonical [`Poly2`].
pub fn parse_poly(text: &str) -> Result<Poly2, ParseError> {
    let mut cur = Cursor::new(text);
    let mut poly = Poly2::zero();
    if cur.peek().is_none() {
        return Err(cur.err("empty input"));
    }
    let (c, a, b) = cur.term()?;
    poly.add_term(a, b, c);
    while let Some(b0) = cur.peek() {
        if b0 != b'+' && b0 != b'-' {
            return Err(cur.err("expected '+', '-', or end of input"));
        }
        let (c, a, b) = cur.term()?;
        poly.add_term(a, b, c);
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_1_surface() {
        let p = parse_poly("y^4 + 1*x^4*y^2 + x^8").unwrap();
        let support: Vec<_> = p.support().collect();
        assert_eq!(support, vec![(0, 4), (4, 2), (8, 0)]);
        for (a, b) in support {
            assert_eq!(p.coeff(a, b), Rat::one());
        }
    }

    #[test]
    fn zero_and_cancellation() {
        assert!(parse_poly("0").unwrap().is_zero());
        assert!(parse_poly("x*y - x*y").unwrap().is_zero());
        assert!(parse_poly("3/4 - 3/4").unwrap().is_zero());
    }

    #[test]
    fn aliases_and_coefficients() {
        assert_eq!(
            parse_poly("t2^4 + t1^4*t2^2 + t1^8").unwrap(),
            parse_poly("y^4 + x^4*y^2 + x^8").unwrap()
        );
        let p = parse_poly("-3/2*x*y^2 + 2*x - 7").unwrap();
        assert_eq!(p.coeff(1, 2), Rat::new(-3, 2));
        assert_eq!(p.coeff(1, 0), Rat::from_int(2));
        assert_eq!(p.coeff(0, 0), Rat::from_int(-7));
    }

    #[test]
    fn like_terms_collect() {
        let p = parse_poly("x^2 + x^2 + y - y + 1/3 + 1/6").unwrap();
        assert_eq!(p.coeff(2, 0), Rat::from_int(2));
        assert_eq!(p.coeff(0, 1), Rat::zero());
        assert_eq!(p.coeff(0, 0), Rat::new(1, 2));
    }

    #[test]
    fn repeated_variables_multiply() {
        let p = parse_poly("x*x*y*x").unwrap();
        assert_eq!(p.coeff(3, 1), Rat::one());
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "garbage(", "x +", "2x", "x^", "* x", "1/0", "x^2^3"] {
            assert!(
                matches!(parse_poly(bad), Err(ParseError::Malformed { .. })),
                "expected malformed: {bad:?} -> {:?}",
                parse_poly(bad)
            );
        }
    }

    #[test]
    fn exponent_errors() {
        assert!(matches!(
            parse_poly("x^-2"),
            Err(ParseError::Exponent { .. })
        ));
        assert!(matches!(
            parse_poly("x^1/2"),
            Err(ParseError::Exponent { .. })
        ));
        let err = parse_poly("y^4 + x^-1").unwrap_err();
        assert!(
            err.offset() >= 7,
            "offset points into the exponent: {err:?}"
        );
    }
}
