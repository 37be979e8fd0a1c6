use std::collections::BTreeMap;
use std::fmt;

use super::{LieError, Point, Rank1Element};
use crate::linalg;
use crate::scalar::{Rational, Ring};

/// `W_n = Der(C[t_1^{±1}, ..., t_n^{±1}])` with basis `t^r d_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WnAlgebra {
    n: usize,
}

impl WnAlgebra {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "W_0 is not a thing");
        WnAlgebra { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis<C: Ring>(&self, r: &[i64], a: usize) -> WnElement<C> {
        WnElement::basis(*self, Point::new(r), a)
    }
}

/// Finite combination of `t^r d_a`; directions are 0-based internally.
#[derive(Clone, PartialEq)]
pub struct WnElement<C> {
    algebra: WnAlgebra,
    terms: BTreeMap<(Point, usize), C>,
}

impl<C: Ring> WnElement<C> {
    pub fn zero(algebra: WnAlgebra) -> Self {
        WnElement { algebra, terms: BTreeMap::new() }
    }

    pub fn basis(algebra: WnAlgebra, r: Point, a: usize) -> Self {
        assert_eq!(r.coords().len(), algebra.n, "exponent length");
        assert!(a < algebra.n, "direction out of range");
        let mut e = Self::zero(algebra);
        e.terms.insert((r, a), C::one());
        e
    }

    pub fn algebra(&self) -> WnAlgebra {
        self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<(Point, usize), C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, r: Point, a: usize, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (r, a);
        let v = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    fn check(&self, other: &Self) -> Result<(), LieError> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(LieError::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LieError> {
        self.check(other)?;
        let mut out = self.clone();
        for ((r, a), c) in &other.terms {
            out.add_term(r.clone(), *a, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.algebra);
        for ((r, a), v) in &self.terms {
            out.add_term(r.clone(), *a, v.clone() * c);
        }
        out
    }

    /// `[t^r d_a, t^s d_b] = s_a t^{r+s} d_b - r_b t^{r+s} d_a`.
    pub fn bracket(&self, other: &Self) -> Result<Self, LieError> {
        self.check(other)?;
        let mut out = Self::zero(self.algebra);
        for ((r, a), x) in &self.terms {
            for ((s, b), y) in &other.terms {
                let xy = x.clone() * y;
                let rs = r.add(s);
                let sa = s.coords()[*a];
                let rb = r.coords()[*b];
                if sa != 0 {
                    out.add_term(rs.clone(), *b, C::from_i64(sa) * &xy);
                }
                if rb != 0 {
                    out.add_term(rs, *a, C::from_i64(-rb) * &xy);
                }
            }
        }
        Ok(out)
    }
}

impl<C: Ring> fmt::Display for WnElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((r, a), c)| {
                let idx: Vec<String> = r.coords().iter().map(i64::to_string).collect();
                let basis = format!("t[{}]d{}", idx.join(","), a + 1);
                if c.is_one() {
                    basis
                } else {
                    format!("({c})*{basis}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Ring> fmt::Debug for WnElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Jacobi identity on every triple of basis elements drawn from `samples`.
pub fn wn_jacobi_check(algebra: WnAlgebra, samples: &[(Point, usize)]) -> super::JacobiReport {
    let basis: Vec<WnElement<Rational>> =
        samples.iter().map(|(r, a)| WnElement::basis(algebra, r.clone(), *a)).collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    for x in &basis {
        for y in &basis {
            for z in &basis {
                checked += 1;
                let j = x.bracket(y).and_then(|v| v.bracket(z)).unwrap();
                let j = j.add(&y.bracket(z).and_then(|v| v.bracket(x)).unwrap()).unwrap();
                let j = j.add(&z.bracket(x).and_then(|v| v.bracket(y)).unwrap()).unwrap();
                if !j.is_zero() {
                    failures.push(format!("({x}, {y}, {z}) -> {j}"));
                }
            }
        }
    }
    super::JacobiReport { checked, failures }
}

/// `t^r d_μ ↦ Σ_a μ_a t^r d_a`, reading `μ` off the weight functional.
pub fn solenoidal_embed<C: Ring>(x: &Rank1Element<C>, target: WnAlgebra) -> Result<WnElement<C>, LieError> {
    let alg = x.algebra();
    if alg.lattice().is_symbolic() {
        return Err(LieError::SymbolicLattice);
    }
    if alg.lattice().rank() != target.n() {
        return Err(LieError::RankMismatch { expected: target.n(), got: alg.lattice().rank() });
    }
    let mut out = WnElement::zero(target);
    for (r, c) in x.terms() {
        for (a, mu) in alg.weights().iter().enumerate() {
            out.add_term(r.clone(), a, c.clone() * mu);
        }
    }
    Ok(out)
}

/// An element of `GL_n(Z)`, acting on `W_n` by pushing derivations forward
/// along the torus automorphism `t^r ↦ t^{g r}`:
/// `g · (t^r d_a) = Σ_b (g^{-1})_{ab} t^{g r} d_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeAutomorphism {
    matrix: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
}

impl LatticeAutomorphism {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self, LieError> {
        let n = matrix.len();
        for row in &matrix {
            if row.len() != n {
                return Err(LieError::RankMismatch { expected: n, got: row.len() });
            }
        }
        let det = determinant(&matrix);
        if det != 1 && det != -1 {
            return Err(LieError::NotUnimodular(det));
        }
        let inverse = integer_inverse(&matrix);
        Ok(LatticeAutomorphism { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        LatticeAutomorphism { matrix: m.clone(), inverse: m }
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &[Vec<i64>] {
        &self.inverse
    }

    pub fn inverse(&self) -> LatticeAutomorphism {
        LatticeAutomorphism { matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    /// `self · other` as matrices.
    pub fn compose(&self, other: &LatticeAutomorphism) -> LatticeAutomorphism {
        LatticeAutomorphism { matrix: int_matmul(&self.matrix, &other.matrix), inverse: int_matmul(&other.inverse, &self.inverse) }
    }

    /// `g r`.
    pub fn map_point(&self, r: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(r).map(|(a, b)| a * b).sum()).collect()
    }

    /// `g^{-1} r`.
    pub fn unmap_point(&self, r: &[i64]) -> Vec<i64> {
        self.inverse.iter().map(|row| row.iter().zip(r).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply<C: Ring>(&self, x: &WnElement<C>) -> Result<WnElement<C>, LieError> {
        let n = x.algebra().n();
        if n != self.n() {
            return Err(LieError::RankMismatch { expected: self.n(), got: n });
        }
        let mut out = WnElement::zero(x.algebra());
        for ((r, a), c) in x.terms() {
            let gr = Point::new(&self.map_point(r.coords()));
            for b in 0..n {
                let g = self.inverse[*a][b];
                if g != 0 {
                    out.add_term(gr.clone(), b, C::from_i64(g) * c);
                }
            }
        }
        Ok(out)
    }
}

fn int_matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()).collect()
}

/// Bareiss fraction-free elimination.
fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

fn integer_inverse(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = m[i].iter().map(|&x| Rational::from_i64(x)).collect();
            row.extend((0..n).map(|j| Rational::from_i64(i64::from(i == j))));
            row
        })
        .collect();
    let e = linalg::rref(&rows, 2 * n);
    e.rows
        .iter()
        .map(|r| r[n..].iter().map(|x| x.to_i64().expect("unimodular inverse is integral")).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn bracket_examples() {
        let w = WnAlgebra::new(2);
        let a: WnElement<Rational> = w.basis(&[1, 0], 0);
        let b = w.basis(&[0, 1], 1);
        assert!(a.bracket(&b).unwrap().is_zero());

        let a: WnElement<Rational> = w.basis(&[1, 0], 1);
        let b = w.basis(&[0, 1], 0);
        let expect = w.basis(&[1, 1], 0).add(&w.basis(&[1, 1], 1).scale(&q(-1))).unwrap();
        assert_eq!(a.bracket(&b).unwrap(), expect);
        assert_eq!(a.to_string(), "t[1,0]d2");
    }

    #[test]
    fn unimodularity() {
        assert!(LatticeAutomorphism::new(vec![vec![2, 1], vec![1, 1]]).is_ok());
        assert_eq!(LatticeAutomorphism::new(vec![vec![2, 0], vec![0, 1]]), Err(LieError::NotUnimodular(2)));
        let g = LatticeAutomorphism::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(g.inverse_matrix(), &[vec![1, -1], vec![-1, 2]]);
    }
}
