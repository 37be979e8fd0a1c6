//! The universal enveloping algebra of a rank-one algebra, in PBW form.

mod identity;
mod pbw;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::lie::{Point, Rank1Algebra};
use crate::scalar::{binomial, Ring};

pub use identity::{
    intro_residue, key_identity_residue, verify_intro_identity, verify_key_identity, verify_solenoidal_identity,
    IdentityMode, IdentityRecord,
};
pub use pbw::{pbw_normal_form, Reducer, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnvelopingError {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// An ordered product `e_{x_1} e_{x_2} ... e_{x_d}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub SmallVec<[Point; 4]>);

impl Monomial {
    pub fn new(factors: impl IntoIterator<Item = Point>) -> Self {
        Monomial(factors.into_iter().collect())
    }

    pub fn factors(&self) -> &[Point] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().chain(other.0.iter()).cloned().collect())
    }
}

/// A finite combination of monomials, not necessarily in normal form.
#[derive(Clone)]
pub struct UeaElement<C> {
    algebra: Arc<Rank1Algebra<C>>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> UeaElement<C> {
    pub fn zero(algebra: &Arc<Rank1Algebra<C>>) -> Self {
        UeaElement { algebra: algebra.clone(), terms: BTreeMap::new() }
    }

    pub fn one(algebra: &Arc<Rank1Algebra<C>>) -> Self {
        Self::monomial(algebra, Monomial::new([]), C::one())
    }

    pub fn monomial(algebra: &Arc<Rank1Algebra<C>>, m: Monomial, c: C) -> Self {
        let mut out = Self::zero(algebra);
        out.add_term(m, c);
        out
    }

    pub fn generator(algebra: &Arc<Rank1Algebra<C>>, x: Point) -> Self {
        Self::monomial(algebra, Monomial::new([x]), C::one())
    }

    pub fn algebra(&self) -> &Arc<Rank1Algebra<C>> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), EnvelopingError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(EnvelopingError::AlgebraMismatch)
        }
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &C) -> Result<(), EnvelopingError> {
        self.check(other)?;
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone() * c);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, EnvelopingError> {
        let mut out = self.clone();
        out.add_scaled(other, &C::one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, EnvelopingError> {
        let mut out = self.clone();
        out.add_scaled(other, &-C::one())?;
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c);
        }
        out
    }

    /// Free product: concatenation of monomials. The result is not reduced.
    pub fn multiply(&self, other: &Self) -> Result<Self, EnvelopingError> {
        self.check(other)?;
        let mut out = Self::zero(&self.algebra);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), x.clone() * y);
            }
        }
        Ok(out)
    }

    /// True when every monomial is nondecreasing in the lattice order.
    pub fn is_normal(&self) -> bool {
        let l = self.algebra.lattice();
        self.terms
            .keys()
            .all(|m| m.0.windows(2).all(|w| l.cmp(&w[0], &w[1]) != std::cmp::Ordering::Greater))
    }
}

impl<C: Ring> PartialEq for UeaElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.check(other).is_ok() && self.terms == other.terms
    }
}

impl<C: Ring> fmt::Display for UeaElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let l = self.algebra.lattice();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let body: String = if m.0.is_empty() {
                    "1".into()
                } else {
                    m.0.iter().map(|x| format!("e[{}]", l.display(x))).collect()
                };
                if c.is_one() {
                    body
                } else {
                    format!("({c})*{body}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Ring> fmt::Debug for UeaElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Ω^{(m,h)}_{k,s} = Σ_i (-1)^i C(m,i) e_{k-ih} e_{s+ih}`, unreduced.
pub fn differentiator<C: Ring>(algebra: &Arc<Rank1Algebra<C>>, m: u32, k: &Point, s: &Point, h: &Point) -> UeaElement<C> {
    let mut out = UeaElement::zero(algebra);
    for i in 0..=m {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let c = C::from_i64(sign * binomial(m, i));
        let ih = h.scale(i as i64);
        out.add_term(Monomial::new([k.sub(&ih), s.add(&ih)]), c);
    }
    out
}

/// `{x, y} = xy + yx`, in normal form.
pub fn anticommutator<C: Ring>(reducer: &mut Reducer<C>, x: &UeaElement<C>, y: &UeaElement<C>) -> Result<UeaElement<C>, EnvelopingError> {
    let sum = x.multiply(y)?.add(&y.multiply(x)?)?;
    Ok(reducer.normal_form(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn multiply_is_concatenation() {
        let w = Arc::new(Rank1Algebra::witt());
        let l = w.lattice().clone();
        let e = |i: i64| UeaElement::generator(&w, l.concrete(&[i]));
        let x = e(1).add(&e(2)).unwrap().multiply(&e(3)).unwrap();
        let mut want = UeaElement::zero(&w);
        want.add_term(Monomial::new([l.concrete(&[1]), l.concrete(&[3])]), Rational::one());
        want.add_term(Monomial::new([l.concrete(&[2]), l.concrete(&[3])]), Rational::one());
        assert_eq!(x, want);
    }

    #[test]
    fn casimir_differentiator() {
        let w = Arc::new(Rank1Algebra::witt());
        let l = w.lattice().clone();
        let om = differentiator(&w, 2, &l.concrete(&[1]), &l.concrete(&[-1]), &l.concrete(&[1]));
        assert_eq!(om.to_string(), "e[-1]e[1] + (-2)*e[0]e[0] + e[1]e[-1]");
    }
}
