//! Recursive-descent reader for scalar literals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Backend, NumError, Scalar};

struct Reader<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

pub(crate) fn parse_scalar(text: &str, backend: Backend) -> Result<Scalar, NumError> {
    let value = parse_natural(text)?;
    value.to_backend(backend)
}

/// Exact value in the smallest backend that holds it.
pub(crate) fn parse_natural(text: &str) -> Result<Scalar, NumError> {
    let mut r = Reader {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let value = r.expr()?;
    r.skip_ws();
    if r.pos != r.bytes.len() {
        return Err(r.fail());
    }
    Ok(value)
}

impl<'a> Reader<'a> {
    fn fail(&self) -> NumError {
        NumError::Parse(self.src.to_string())
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar, NumError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, NumError> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.try_mul(&self.factor()?)?;
            } else if self.eat(b'/') {
                acc = acc.try_div(&self.factor()?)?;
            } else {
                break;
            }
        }
        Ok(if negate { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<Scalar, NumError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.fail());
                }
                Ok(v)
            }
            Some(b's') => {
                if !self.src[self.pos..].starts_with("sqrt") {
                    return Err(self.fail());
                }
                self.pos += 4;
                if !self.eat(b'(') {
                    return Err(self.fail());
                }
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.fail());
                }
                v.sqrt()
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            _ => Err(self.fail()),
        }
    }

    fn number(&mut self) -> Result<Scalar, NumError> {
        let start = self.pos;
        let digits = |r: &mut Self| {
            let s = r.pos;
            while r.pos < r.bytes.len() && r.bytes[r.pos].is_ascii_digit() {
                r.pos += 1;
            }
            &r.src[s..r.pos]
        };
        let int_part = digits(self).to_string();
        let mut frac_part = String::new();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            frac_part = digits(self).to_string();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(self.fail());
        }
        let mut exp: i32 = 0;
        if self.pos < self.bytes.len() && (self.bytes[self.pos] | 0x20) == b'e' {
            self.pos += 1;
            let neg = if self.pos < self.bytes.len() && self.bytes[self.pos] == b'-' {
                self.pos += 1;
                true
            } else {
                if self.pos < self.bytes.len() && self.bytes[self.pos] == b'+' {
                    self.pos += 1;
                }
                false
            };
            let e = digits(self);
            exp = e.parse().map_err(|_| NumError::Parse(self.src[start..].to_string()))?;
            if neg {
                exp = -exp;
            }
        }
        let mantissa: BigInt = format!("{int_part}{frac_part}")
            .parse()
            .map_err(|_| self.fail())?;
        let scale = exp - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
        let value = if scale >= 0 {
            BigRational::from_integer(mantissa * pow)
        } else {
            BigRational::new(mantissa, pow)
        };
        debug_assert!(!value.denom().is_zero() && value.denom() >= &BigInt::one());
        Ok(Scalar::from_rational(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        let r = Backend::Rational;
        assert_eq!(parse_scalar("3/2", r).unwrap(), Scalar::ratio(3, 2));
        assert_eq!(parse_scalar("-0.25", r).unwrap(), Scalar::ratio(-1, 4));
        assert_eq!(parse_scalar("1.5e2", r).unwrap(), Scalar::int(150));
        assert_eq!(parse_scalar("2e-1", r).unwrap(), Scalar::ratio(1, 5));
        let q = parse_scalar("sqrt(3)/2", Backend::QuadExt(3)).unwrap();
        assert_eq!(q, Scalar::quad((0, 1), (1, 2), 3));
        let q = parse_scalar("1/2 - 3/4*sqrt(3)", Backend::QuadExt(3)).unwrap();
        assert_eq!(q, Scalar::quad((1, 2), (-3, 4), 3));
        assert_eq!(parse_scalar("sqrt(4)", r).unwrap(), Scalar::int(2));
        assert!(parse_scalar("sqrt(3)", r).is_err());
        assert!(parse_scalar("1/2x", r).is_err());
        let f = parse_scalar("0.1", Backend::Float).unwrap();
        assert_eq!(f, Scalar::float(0.1));
    }
}
