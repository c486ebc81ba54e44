//! Parser for surd literals such as `(39+13*sqrt(173))/82`, `4/sqrt(17)`,
//! `sqrt(5)` or `0.959129`.
//!
//! The grammar is a tiny arithmetic-expression language over integers,
//! decimal literals and `sqrt(...)` of a nonnegative rational, evaluated
//! exactly into a [`QuadSurd`]. Anything a [`QuadSurd`] prints re-parses to
//! the same value.

use num_bigint::BigInt;
use num_traits::One;

use super::{BigRational, NumError, QuadSurd};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse_surd(input: &str) -> Result<QuadSurd, NumError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(value)
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> NumError {
        NumError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), NumError> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn expr(&mut self) -> Result<QuadSurd, NumError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QuadSurd, NumError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.checked_mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QuadSurd, NumError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<QuadSurd, NumError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(b's') => {
                if self.src[self.pos..].starts_with(b"sqrt") {
                    self.pos += 4;
                    self.expect(b'(')?;
                    let inner = self.expr()?;
                    self.expect(b')')?;
                    let rational = inner
                        .to_rational()
                        .ok_or_else(|| self.error("nested radicals are not quadratic"))?;
                    QuadSurd::sqrt_rational(rational)
                } else {
                    Err(self.error("unknown symbol"))
                }
            }
            _ => Err(self.error("expected a number, 'sqrt' or '('")),
        }
    }

    fn number(&mut self) -> Result<QuadSurd, NumError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part: BigInt = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("bad integer"))?;
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.error("expected digits after decimal point"));
            }
            let frac_digits = std::str::from_utf8(&self.src[frac_start..self.pos]).unwrap();
            let frac: BigInt = frac_digits.parse().map_err(|_| self.error("bad fraction"))?;
            let scale = BigInt::from(10).pow((self.pos - frac_start) as u32);
            let value = BigRational::new(int_part * &scale + frac, scale);
            return Ok(QuadSurd::from_rational(value));
        }
        Ok(QuadSurd::from_rational(BigRational::new(int_part, BigInt::one())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> QuadSurd {
        parse_surd(s).unwrap()
    }

    #[test]
    fn literals() {
        assert_eq!(parse("(39+13*sqrt(173))/82"), QuadSurd::new_i64(39, 13, 173, 82).unwrap());
        assert_eq!(parse("(1+sqrt(17))/2"), QuadSurd::new_i64(1, 1, 17, 2).unwrap());
        assert_eq!(parse("7/3"), QuadSurd::new_i64(7, 0, 1, 3).unwrap());
        assert_eq!(parse("sqrt(5)"), QuadSurd::new_i64(0, 1, 5, 1).unwrap());
        assert_eq!(parse("-2"), QuadSurd::from_i64(-2));
    }

    #[test]
    fn expressions_evaluate_exactly() {
        // quotient with a surd denominator
        assert_eq!(parse("164/(13*sqrt(173))"), QuadSurd::new_i64(0, 164, 173, 2249).unwrap());
        assert_eq!(parse("4/(3+sqrt(2))"), QuadSurd::new_i64(12, -4, 2, 7).unwrap());
        assert_eq!(parse("sqrt(2)-1/2"), QuadSurd::new_i64(-1, 2, 2, 2).unwrap());
        assert_eq!(parse("sqrt(4/9)"), QuadSurd::new_i64(2, 0, 1, 3).unwrap());
        assert_eq!(parse(" ( 1 + sqrt( 5 ) ) / 2 "), QuadSurd::new_i64(1, 1, 5, 2).unwrap());
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(
            parse("0.914213"),
            QuadSurd::from_rational(BigRational::new(914_213.into(), 1_000_000.into()))
        );
        assert_eq!(parse("2.5"), QuadSurd::new_i64(5, 0, 1, 2).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_surd("sqrt(sqrt(2))").is_err());
        assert!(parse_surd("1 +").is_err());
        assert!(parse_surd("(1").is_err());
        assert!(parse_surd("1/0").is_err());
        assert!(parse_surd("sqrt(-1)").is_err());
        assert!(parse_surd("sqrt(2)+sqrt(3)").is_err());
        assert!(parse_surd("").is_err());
    }
}
