//! Exact scalar fields and the polynomial rings built over them.
//!
//! Everything above this layer is generic over [`Ring`] (coefficients) and
//! [`Field`] (things we row-reduce over). The three concrete carriers are
//! [`Rational`], [`QuadExt`] and [`Poly`].

mod parse;
mod poly;
mod quad;
mod rational;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use parse::ParseError;
pub use poly::{Exponent, Poly, Vars};
pub use quad::QuadExt;
pub use rational::Rational;

/// Failures of scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("missing value for symbol `{0}`")]
    MissingSymbol(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A commutative ring with exact, decidable equality.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Sum of an iterator, starting from zero.
    fn sum<I: IntoIterator<Item = Self>>(it: I) -> Self {
        it.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }
}

/// A field: every non-zero element is invertible.
pub trait Field: Ring + From<Rational> + TextScalar {
    fn inv(&self) -> Result<Self, ScalarError>;

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * &rhs.inv()?)
    }

    /// `Some(q)` when the element lies in the prime field.
    fn as_rational(&self) -> Option<Rational>;

    /// Short name of the field context, e.g. `Q` or `Q(sqrt(19))`.
    fn context_name(&self) -> String;
}

/// Text form shared by the serializers and the parser.
pub trait TextScalar: Sized {
    fn parse_scalar(s: &str) -> Result<Self, ParseError>;
    /// True when the printed form needs parentheses inside a product.
    fn needs_parens(&self) -> bool;
}

/// A scalar of any supported context, with checked mixed arithmetic.
///
/// The engine itself works with the concrete types; this enum is the
/// boundary type for text input and for callers that do not know the
/// context statically.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Poly(Poly<Rational>),
    Quad(QuadExt),
}

impl Scalar {
    fn kind(&self) -> &'static str {
        match self {
            Scalar::Rational(_) => "rational",
            Scalar::Poly(_) => "polynomial",
            Scalar::Quad(_) => "quadratic",
        }
    }

    fn mismatch(&self, other: &Scalar) -> ScalarError {
        ScalarError::ContextMismatch(format!("{} vs {}", self.kind(), other.kind()))
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.clone() + b)),
            (Scalar::Poly(a), Scalar::Poly(b)) => a.checked_add(b).map(Scalar::Poly),
            (Scalar::Quad(a), Scalar::Quad(b)) => a.checked_add(b).map(Scalar::Quad),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_add(&rhs.neg())
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.clone() * b)),
            (Scalar::Poly(a), Scalar::Poly(b)) => a.checked_mul(b).map(Scalar::Poly),
            (Scalar::Quad(a), Scalar::Quad(b)) => a.checked_mul(b).map(Scalar::Quad),
            _ => Err(self.mismatch(rhs)),
        }
    }

    /// Division; polynomials may only be divided by non-zero constants.
    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.div(b).map(Scalar::Rational),
            (Scalar::Quad(a), Scalar::Quad(b)) => {
                if a.radicand() != 0 && b.radicand() != 0 && a.radicand() != b.radicand() {
                    return Err(self.mismatch(rhs));
                }
                a.div(b).map(Scalar::Quad)
            }
            (Scalar::Poly(a), Scalar::Poly(b)) => match b.as_constant() {
                Some(c) => Ok(Scalar::Poly(a.scale(&c.inv()?))),
                None => Err(ScalarError::ContextMismatch(
                    "polynomial division by a non-constant".into(),
                )),
            },
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a.clone()),
            Scalar::Poly(a) => Scalar::Poly(-a.clone()),
            Scalar::Quad(a) => Scalar::Quad(-a.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(a) => a.is_zero(),
            Scalar::Poly(a) => a.is_zero(),
            Scalar::Quad(a) => a.is_zero(),
        }
    }

    /// Evaluates a polynomial scalar at the given point; other kinds pass through.
    pub fn specialize(&self, assignment: &BTreeMap<String, Rational>) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Poly(p) => p.specialize(assignment).map(Scalar::Rational),
            other => Ok(other.clone()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{a}"),
            Scalar::Poly(a) => write!(f, "{a}"),
            Scalar::Quad(a) => write!(f, "{a}"),
        }
    }
}

/// Binomial coefficient as a small integer.
pub fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rational_sum() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
    }

    #[test]
    fn difference_of_squares() {
        let vars = Vars::new(["k", "s"]);
        let k = Poly::<Rational>::var(&vars, "k");
        let s = Poly::<Rational>::var(&vars, "s");
        let lhs = (k.clone() + &s) * (k.clone() - &s);
        let rhs = k.clone() * &k - s.clone() * &s;
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "k^2 - s^2");
    }

    #[test]
    fn quadratic_conjugate_product() {
        // a^2 - d b^2 with a = 7/2, b = 1/2, d = 19
        let x = QuadExt::new(r(7, 2), r(-1, 2), 19);
        let y = QuadExt::new(r(7, 2), r(1, 2), 19);
        let oracle = r(7, 2) * r(7, 2) - Rational::from_i64(19) * r(1, 2) * r(1, 2);
        assert_eq!(oracle, r(15, 2));
        assert_eq!(x * y, QuadExt::from(r(15, 2)));
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let a = Scalar::Rational(r(1, 2));
        let b = Scalar::Quad(QuadExt::new(r(0, 1), r(1, 1), 19));
        assert!(matches!(a.checked_add(&b), Err(ScalarError::ContextMismatch(_))));
        let c = Scalar::Quad(QuadExt::new(r(0, 1), r(1, 1), 2));
        assert!(matches!(b.checked_mul(&c), Err(ScalarError::ContextMismatch(_))));
        let v1 = Scalar::Poly(Poly::var(&Vars::new(["k"]), "k"));
        let v2 = Scalar::Poly(Poly::var(&Vars::new(["s"]), "s"));
        assert!(matches!(v1.checked_add(&v2), Err(ScalarError::ContextMismatch(_))));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let a = Scalar::Rational(r(1, 2));
        let z = Scalar::Rational(Rational::zero());
        assert_eq!(a.checked_div(&z), Err(ScalarError::DivisionByZero));
        let q = QuadExt::new(r(0, 1), r(0, 1), 19);
        assert_eq!(QuadExt::one().div(&q), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn specialize_examples() {
        let vars = Vars::new(["alpha", "k", "s"]);
        let k = Poly::<Rational>::var(&vars, "k");
        let s = Poly::<Rational>::var(&vars, "s");
        let a = Poly::<Rational>::var(&vars, "alpha");
        let mut asg = BTreeMap::new();
        asg.insert("s".to_string(), Rational::from_i64(1));
        asg.insert("alpha".to_string(), Rational::from_i64(3));
        asg.insert("k".to_string(), Rational::from_i64(2));
        assert_eq!((s.clone() + a * &k).specialize(&asg).unwrap(), Rational::from_i64(7));
        let mut asg2 = BTreeMap::new();
        asg2.insert("k".to_string(), Rational::from_i64(3));
        asg2.insert("s".to_string(), Rational::from_i64(1));
        let d = k.clone() * &k - s.clone() * &s;
        assert_eq!(d.specialize(&asg2).unwrap(), Rational::from_i64(8));
        assert_eq!(Poly::<Rational>::zero().specialize(&BTreeMap::new()).unwrap(), Rational::zero());
        let missing = d.specialize(&BTreeMap::new()).unwrap_err();
        assert_eq!(missing, ScalarError::MissingSymbol("k".into()));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(15, 7), 6435);
        assert_eq!(binomial(3, 5), 0);
    }
}
