use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{IndexLattice, LieError, Point};
use crate::scalar::{Field, Poly, Rational, Ring, Vars};

/// The rank-one family `[e_x, e_y] = φ(y - x) e_{x+y}`.
///
/// With lattice `Z` and `φ = id` this is the Witt algebra `W_1`; with
/// lattice `Z^n` and `φ(r) = μ·r` it is the solenoidal algebra `W_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Algebra<C> {
    lattice: IndexLattice,
    /// Images of the lattice generators under `φ`.
    weights: Vec<C>,
}

impl<C: Ring> Rank1Algebra<C> {
    pub fn new(lattice: IndexLattice, weights: Vec<C>) -> Self {
        assert_eq!(lattice.rank(), weights.len(), "one weight per generator");
        Rank1Algebra { lattice, weights }
    }

    pub fn lattice(&self) -> &IndexLattice {
        &self.lattice
    }

    pub fn weights(&self) -> &[C] {
        &self.weights
    }

    /// `φ(x)`.
    pub fn phi(&self, x: &Point) -> C {
        self.lattice.evaluate(x, &self.weights)
    }

    pub fn basis(self: &Arc<Self>, x: Point) -> Rank1Element<C> {
        Rank1Element::basis(self, x)
    }
}

impl Rank1Algebra<Rational> {
    /// `W_1` over the rationals.
    pub fn witt() -> Self {
        Rank1Algebra::new(IndexLattice::integers(), vec![Rational::one()])
    }

    /// `W_μ` for a concrete `μ`.
    pub fn solenoidal(mu: Vec<Rational>) -> Self {
        Rank1Algebra::new(IndexLattice::axes(mu.len()), mu)
    }
}

impl<F: Field> Rank1Algebra<Poly<F>> {
    /// `W_1` with formal index symbols; `φ` sends each symbol to the
    /// same-named polynomial variable in `vars`.
    pub fn witt_symbolic(symbols: &[&str], vars: &Vars) -> Self {
        let lattice = IndexLattice::with_symbols(symbols, &IndexLattice::integers());
        let mut weights: Vec<Poly<F>> = symbols.iter().map(|s| Poly::var(vars, s)).collect();
        weights.push(Poly::constant(vars, F::one()));
        Rank1Algebra::new(lattice, weights)
    }

    /// `W_μ` with `μ = (mu_1, ..., mu_n)` symbolic and formal index symbols.
    pub fn solenoidal_symbolic(n: usize, symbols: &[&str], vars: &Vars) -> Self {
        let lattice = IndexLattice::with_symbols(symbols, &IndexLattice::axes(n));
        let mut weights: Vec<Poly<F>> = symbols.iter().map(|s| Poly::var(vars, s)).collect();
        for i in 1..=n {
            weights.push(Poly::var(vars, &format!("mu{i}")));
        }
        Rank1Algebra::new(lattice, weights)
    }
}

/// A finite combination of basis elements `e_x`.
#[derive(Clone)]
pub struct Rank1Element<C> {
    algebra: Arc<Rank1Algebra<C>>,
    terms: BTreeMap<Point, C>,
}

impl<C: Ring> Rank1Element<C> {
    pub fn zero(algebra: &Arc<Rank1Algebra<C>>) -> Self {
        Rank1Element { algebra: algebra.clone(), terms: BTreeMap::new() }
    }

    pub fn basis(algebra: &Arc<Rank1Algebra<C>>, x: Point) -> Self {
        let mut e = Self::zero(algebra);
        e.terms.insert(x, C::one());
        e
    }

    pub fn algebra(&self) -> &Arc<Rank1Algebra<C>> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Point, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: Point, c: C) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&x) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(x, v);
        }
    }

    fn same_algebra(&self, other: &Self) -> Result<(), LieError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(LieError::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LieError> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (x, v) in &self.terms {
            out.add_term(x.clone(), v.clone() * c);
        }
        out
    }

    /// `[self, other]`, expanded bilinearly.
    pub fn bracket(&self, other: &Self) -> Result<Self, LieError> {
        self.same_algebra(other)?;
        let mut out = Self::zero(&self.algebra);
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                let c = self.algebra.phi(&y.sub(x));
                if c.is_zero() {
                    continue;
                }
                out.add_term(x.add(y), c * a * b);
            }
        }
        Ok(out)
    }
}

impl<C: Ring> PartialEq for Rank1Element<C> {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other).is_ok() && self.terms == other.terms
    }
}

impl<C: Ring> fmt::Debug for Rank1Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Ring> fmt::Display for Rank1Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(x, c)| {
                let idx = self.algebra.lattice().display(x);
                if c.is_one() {
                    format!("e[{idx}]")
                } else {
                    format!("({c})*e[{idx}]")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Outcome of a Jacobi sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct JacobiReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl JacobiReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `[[x,y],z] + [[y,z],x] + [[z,x],y] = 0` on every sampled basis triple.
pub fn jacobi_check<C: Ring>(algebra: &Arc<Rank1Algebra<C>>, samples: &[(Point, Point, Point)]) -> JacobiReport {
    let mut failures = Vec::new();
    for (a, b, c) in samples {
        let x = Rank1Element::basis(algebra, a.clone());
        let y = Rank1Element::basis(algebra, b.clone());
        let z = Rank1Element::basis(algebra, c.clone());
        let j = x
            .bracket(&y)
            .and_then(|xy| xy.bracket(&z))
            .and_then(|t1| t1.add(&y.bracket(&z)?.bracket(&x)?))
            .and_then(|t12| t12.add(&z.bracket(&x)?.bracket(&y)?))
            .expect("same algebra");
        if !j.is_zero() {
            let l = algebra.lattice();
            failures.push(format!("({}, {}, {}) -> {j}", l.display(a), l.display(b), l.display(c)));
        }
    }
    JacobiReport { checked: samples.len(), failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_bracket_examples() {
        let w = Arc::new(Rank1Algebra::witt());
        let l = w.lattice().clone();
        let e1 = w.basis(l.concrete(&[1]));
        let em1 = w.basis(l.concrete(&[-1]));
        let e0 = w.basis(l.concrete(&[0]));
        assert_eq!(e1.bracket(&em1).unwrap(), e0.scale(&Rational::from_i64(-2)));
        assert!(e0.bracket(&e0).unwrap().is_zero());
    }

    #[test]
    fn mismatched_algebras_error() {
        let w = Arc::new(Rank1Algebra::witt());
        let s = Arc::new(Rank1Algebra::solenoidal(vec![Rational::one(), Rational::new(1, 2)]));
        let a = w.basis(w.lattice().concrete(&[1]));
        let b = s.basis(s.lattice().concrete(&[1, 0]));
        assert!(matches!(a.bracket(&b), Err(LieError::AlgebraMismatch)));
    }

    #[test]
    fn jacobi_on_small_box() {
        let w = Arc::new(Rank1Algebra::witt());
        let l = w.lattice().clone();
        let mut samples = Vec::new();
        for a in -3..=3 {
            for b in -3..=3 {
                for c in -3..=3 {
                    samples.push((l.concrete(&[a]), l.concrete(&[b]), l.concrete(&[c])));
                }
            }
        }
        let rep = jacobi_check(&w, &samples);
        assert_eq!(rep.checked, 343);
        assert!(rep.pass(), "{:?}", rep.failures);
    }
}
