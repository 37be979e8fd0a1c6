use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Field, ParseError, Rational, Ring, ScalarError, TextScalar};

/// `a + b·√d` for a fixed square-free radicand `d`.
///
/// A radicand of `0` marks a value created without a context (the
/// constants `0`, `1`, integers); it adopts the radicand of whatever it is
/// combined with.
#[derive(Clone)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u32,
}

fn is_square_free(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u32;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: u32) -> Self {
        assert!(is_square_free(d), "radicand {d} is not square-free");
        QuadExt { a, b, d }
    }

    pub fn try_new(a: Rational, b: Rational, d: u32) -> Result<Self, ScalarError> {
        if !is_square_free(d) {
            return Err(ScalarError::ContextMismatch(format!("radicand {d} is not square-free")));
        }
        Ok(QuadExt { a, b, d })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u32 {
        self.d
    }

    /// `a - b√d`.
    pub fn conjugate(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// `a² - d b²`.
    pub fn norm(&self) -> Rational {
        self.a.clone() * &self.a - Rational::from(self.d as i64) * &self.b * &self.b
    }

    fn joint(&self, rhs: &QuadExt) -> Result<u32, ScalarError> {
        match (self.d, rhs.d) {
            (0, d) | (d, 0) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(ScalarError::ContextMismatch(format!("sqrt({x}) vs sqrt({y})"))),
        }
    }

    pub fn checked_add(&self, rhs: &QuadExt) -> Result<QuadExt, ScalarError> {
        let d = self.joint(rhs)?;
        Ok(QuadExt { a: self.a.clone() + &rhs.a, b: self.b.clone() + &rhs.b, d })
    }

    pub fn checked_mul(&self, rhs: &QuadExt) -> Result<QuadExt, ScalarError> {
        let d = self.joint(rhs)?;
        let dd = Rational::from(d as i64);
        Ok(QuadExt {
            a: self.a.clone() * &rhs.a + dd * &self.b * &rhs.b,
            b: self.a.clone() * &rhs.b + self.b.clone() * &rhs.a,
            d,
        })
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        if self.a != other.a || self.b != other.b {
            return false;
        }
        self.b.is_zero() || self.d == other.d
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, self.b.abs(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl TextScalar for QuadExt {
    /// Accepts `a`, `b*sqrt(d)`, `a + b*sqrt(d)` and `a - b*sqrt(d)`.
    fn parse_scalar(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let radical = |t: &str, sign: i64| -> Result<(Rational, u32), ParseError> {
            let t = t.trim();
            let (coef, rest) = t
                .split_once("*sqrt(")
                .ok_or_else(|| ParseError::new(format!("expected `b*sqrt(d)`, got `{t}`")))?;
            let d_str = rest
                .strip_suffix(')')
                .ok_or_else(|| ParseError::new(format!("unclosed sqrt in `{t}`")))?;
            let d: u32 = d_str
                .parse()
                .map_err(|_| ParseError::new(format!("bad radicand `{d_str}`")))?;
            if !is_square_free(d) {
                return Err(ParseError::new(format!("radicand {d} is not square-free")));
            }
            let b: Rational = coef.parse()?;
            Ok((b * Rational::from(sign), d))
        };
        if !s.contains("sqrt") {
            return Ok(QuadExt::from(s.parse::<Rational>()?));
        }
        // Split on the binary operator that precedes the radical term.
        if let Some(idx) = s.find(" + ") {
            let a: Rational = s[..idx].parse()?;
            let (b, d) = radical(&s[idx + 3..], 1)?;
            return Ok(QuadExt { a, b, d });
        }
        if let Some(idx) = s.find(" - ") {
            let a: Rational = s[..idx].parse()?;
            let (b, d) = radical(&s[idx + 3..], -1)?;
            return Ok(QuadExt { a, b, d });
        }
        let (b, d) = radical(s, 1)?;
        Ok(QuadExt { a: Rational::zero(), b, d })
    }

    fn needs_parens(&self) -> bool {
        !self.b.is_zero()
    }
}

impl From<Rational> for QuadExt {
    fn from(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero(), d: 0 }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        self.checked_add(&rhs).expect("quadratic context mismatch")
    }
}

impl<'a> Add<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &'a QuadExt) -> QuadExt {
        self.checked_add(rhs).expect("quadratic context mismatch")
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &'a QuadExt) -> QuadExt {
        self + (-rhs.clone())
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        self.checked_mul(&rhs).expect("quadratic context mismatch")
    }
}

impl<'a> Mul<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &'a QuadExt) -> QuadExt {
        self.checked_mul(rhs).expect("quadratic context mismatch")
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Ring for QuadExt {
    fn zero() -> Self {
        QuadExt::from(Rational::zero())
    }

    fn one() -> Self {
        QuadExt::from(Rational::one())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn from_i64(n: i64) -> Self {
        QuadExt::from(Rational::from(n))
    }
}

impl Field for QuadExt {
    fn inv(&self) -> Result<Self, ScalarError> {
        let n = self.norm();
        if n.is_zero() {
            // d is square-free, so the norm vanishes only at zero.
            return Err(ScalarError::DivisionByZero);
        }
        let ninv = n.inv()?;
        Ok(QuadExt { a: self.a.clone() * &ninv, b: -(self.b.clone() * &ninv), d: self.d })
    }

    fn as_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }

    fn context_name(&self) -> String {
        if self.d == 0 {
            "Q".into()
        } else {
            format!("Q(sqrt({}))", self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64)) -> QuadExt {
        QuadExt::new(Rational::new(a.0, a.1), Rational::new(b.0, b.1), 19)
    }

    #[test]
    fn inverse_round_trip() {
        let x = q((7, 2), (-1, 2));
        assert_eq!(x.clone() * x.inv().unwrap(), QuadExt::one());
    }

    #[test]
    fn text_round_trip() {
        for x in [q((7, 2), (-1, 2)), q((0, 1), (3, 1)), q((5, 1), (0, 1)), q((-22, 4), (-5, 4))] {
            let s = x.to_string();
            assert_eq!(QuadExt::parse_scalar(&s).unwrap(), x, "{s}");
        }
        assert!(QuadExt::parse_scalar("1 + 2*sqrt(4)").is_err());
        assert!(QuadExt::parse_scalar("1 + sqrt(19)").is_err());
    }

    #[test]
    fn non_square_free_rejected() {
        assert!(QuadExt::try_new(Rational::one(), Rational::one(), 12).is_err());
    }
}
