//! The quadratic identity between anticommutators of differentiators.
//!
//! Symbolic mode runs over a lattice whose generators include formal
//! symbols `k, s, p, q`, with coefficients in `Q[k, s, p, q]`: a zero residue
//! proves the identity for every integer specialization that keeps the
//! affine index forms distinct and in the same relative order. Grid mode
//! sweeps concrete tuples and catches the collisions symbolic mode skips.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{differentiator, EnvelopingError, Reducer, Strategy, UeaElement};
use crate::lie::{Point, Rank1Algebra};
use crate::scalar::{binomial, Poly, Rational, Ring, Vars};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityMode {
    Symbolic,
    /// Every `(k, s, p, q)` in `[lo, hi]^4`.
    Grid { lo: i64, hi: i64 },
}

/// One verification record.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityRecord {
    pub mode: &'static str,
    pub m: u32,
    pub r: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<[i64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<i64>>,
    pub lhs_monomials: usize,
    pub rhs_monomials: usize,
    pub residue_term_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
    pub pass: bool,
}

struct Sides<C> {
    lhs: UeaElement<C>,
    rhs: UeaElement<C>,
}

fn sign(i: u32) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The anticommutator double sum, unreduced.
fn lhs_sum<C: Ring>(alg: &Arc<Rank1Algebra<C>>, m: u32, r: u32, [k, s, p, q]: [&Point; 4], h: &Point) -> UeaElement<C> {
    let mut out = UeaElement::zero(alg);
    for i in 0..=m {
        for j in 0..=r {
            let c = C::from_i64(sign(i + j) * binomial(m, i) * binomial(r, j));
            let (ih, jh) = (h.scale(i as i64), h.scale(j as i64));
            let a1 = differentiator(alg, m, &k.sub(&ih), &s.sub(&jh), h);
            let b1 = differentiator(alg, r, &q.add(&ih), &p.add(&jh), h);
            let a2 = differentiator(alg, m, &k.sub(&ih), &q.sub(&jh), h);
            let b2 = differentiator(alg, r, &s.add(&ih), &p.add(&jh), h);
            let mc = -c.clone();
            for (x, y, coef) in [(&a1, &b1, &c), (&b1, &a1, &c), (&a2, &b2, &mc), (&b2, &a2, &mc)] {
                out.add_scaled(&x.multiply(y).expect("same algebra"), coef).expect("same algebra");
            }
        }
    }
    out
}

fn sides<C: Ring>(red: &mut Reducer<C>, m: u32, r: u32, pts: [&Point; 4], h: &Point, intro: bool) -> Sides<C> {
    let alg = red.algebra().clone();
    let [k, s, p, q] = pts;
    let lhs = red.normal_form(&lhs_sum(&alg, m, r, pts, h));
    let qs = alg.phi(&q.sub(s));
    let kp = k.add(p);
    let sq = s.add(q);
    let rhs = if intro {
        let c = qs * &alg.phi(&p.sub(k).add(&h.scale(2 * m as i64)));
        let two_m = h.scale(2 * m as i64);
        differentiator(&alg, 4 * m, &kp.add(&two_m), &sq.sub(&two_m), h).scale(&c)
    } else {
        let n = 2 * m + 2 * r - 1;
        let c1 = qs.clone() * &alg.phi(&p.sub(k).add(&h.scale(2 * r as i64)));
        let c2 = qs * &alg.phi(&p.sub(k).add(&h.scale(2 * m as i64)));
        let a = h.scale(2 * r as i64);
        let b = h.scale(2 * r as i64 - 1);
        let mut out = differentiator(&alg, n, &kp.add(&a), &sq.sub(&a), h).scale(&c1);
        out.add_scaled(&differentiator(&alg, n, &kp.add(&b), &sq.sub(&b), h), &-c2).expect("same algebra");
        out
    };
    let rhs = red.normal_form(&rhs);
    Sides { lhs, rhs }
}

fn record<C: Ring>(mode: &'static str, m: u32, r: u32, s: Sides<C>) -> IdentityRecord {
    let residue = s.lhs.sub(&s.rhs).expect("same algebra");
    let pass = residue.is_zero();
    IdentityRecord {
        mode,
        m,
        r,
        tuple: None,
        h: None,
        lhs_monomials: s.lhs.num_terms(),
        rhs_monomials: s.rhs.num_terms(),
        residue_term_count: residue.num_terms(),
        residue: (!pass).then(|| residue.to_string()),
        pass,
    }
}

/// Normal form of LHS - RHS at the given indices (general `m, r` form).
pub fn key_identity_residue<C: Ring>(red: &mut Reducer<C>, m: u32, r: u32, pts: [&Point; 4], h: &Point) -> UeaElement<C> {
    let s = sides(red, m, r, pts, h, false);
    s.lhs.sub(&s.rhs).expect("same algebra")
}

/// Normal form of LHS - RHS for the `m = r` form with `Ω^{(4m)}` on the right.
pub fn intro_residue<C: Ring>(red: &mut Reducer<C>, m: u32, pts: [&Point; 4], h: &Point) -> UeaElement<C> {
    let s = sides(red, m, m, pts, h, true);
    s.lhs.sub(&s.rhs).expect("same algebra")
}

fn check_mr(m: u32, r: u32) -> Result<(), EnvelopingError> {
    if m < 2 || r < 2 {
        return Err(EnvelopingError::Precondition(format!("need m, r >= 2, got m={m}, r={r}")));
    }
    Ok(())
}

fn symbolic_witt() -> Arc<Rank1Algebra<Poly<Rational>>> {
    let vars = Vars::new(["k", "s", "p", "q"]);
    Arc::new(Rank1Algebra::witt_symbolic(&["k", "s", "p", "q"], &vars))
}

/// Checks the identity over `W_1`, one record per tuple.
pub fn verify_key_identity(m: u32, r: u32, mode: IdentityMode) -> Result<Vec<IdentityRecord>, EnvelopingError> {
    check_mr(m, r)?;
    match mode {
        IdentityMode::Symbolic => {
            let alg = symbolic_witt();
            let l = alg.lattice().clone();
            let g = |n: &str| l.generator(n);
            let (k, s, p, q) = (g("k"), g("s"), g("p"), g("q"));
            let mut red = Reducer::new(&alg, Strategy::Leftmost);
            let h = l.concrete(&[1]);
            Ok(vec![record("symbolic", m, r, sides(&mut red, m, r, [&k, &s, &p, &q], &h, false))])
        }
        IdentityMode::Grid { lo, hi } => {
            let alg = Arc::new(Rank1Algebra::witt());
            let range: Vec<i64> = (lo..=hi).collect();
            let mut tuples = Vec::new();
            for &k in &range {
                for &s in &range {
                    for &p in &range {
                        for &q in &range {
                            tuples.push([k, s, p, q]);
                        }
                    }
                }
            }
            let h = Point::new(&[1]);
            Ok(tuples
                .par_iter()
                .map_init(
                    || Reducer::new(&alg, Strategy::Leftmost),
                    |red, t| {
                        let pts: Vec<Point> = t.iter().map(|&x| Point::new(&[x])).collect();
                        let s = sides(red, m, r, [&pts[0], &pts[1], &pts[2], &pts[3]], &h, false);
                        IdentityRecord { tuple: Some(*t), ..record("grid", m, r, s) }
                    },
                )
                .collect())
        }
    }
}

/// Checks the `m = r` form with `(q-s)(p-k+2m) Ω^{(4m)}_{k+p+2m, s+q-2m}` on the right, symbolically.
pub fn verify_intro_identity(m: u32) -> Result<IdentityRecord, EnvelopingError> {
    check_mr(m, m)?;
    let alg = symbolic_witt();
    let l = alg.lattice().clone();
    let g = |n: &str| l.generator(n);
    let (k, s, p, q) = (g("k"), g("s"), g("p"), g("q"));
    let mut red = Reducer::new(&alg, Strategy::Leftmost);
    Ok(record("intro", m, m, sides(&mut red, m, m, [&k, &s, &p, &q], &l.concrete(&[1]), true)))
}

/// The solenoidal analogue over `W_μ` with `μ = (mu1, ..., mun)` symbolic,
/// `k, s, p, q` symbolic, and one record per concrete step `h`.
pub fn verify_solenoidal_identity(n: usize, m: u32, r: u32, hs: &[Vec<i64>]) -> Result<Vec<IdentityRecord>, EnvelopingError> {
    check_mr(m, r)?;
    let mut names: Vec<String> = ["k", "s", "p", "q"].iter().map(|s| s.to_string()).collect();
    names.extend((1..=n).map(|i| format!("mu{i}")));
    let vars = Vars::new(names);
    let alg = Arc::new(Rank1Algebra::<Poly<Rational>>::solenoidal_symbolic(n, &["k", "s", "p", "q"], &vars));
    let l = alg.lattice().clone();
    let g = |x: &str| l.generator(x);
    let (k, s, p, q) = (g("k"), g("s"), g("p"), g("q"));
    let mut out = Vec::new();
    let mut red = Reducer::new(&alg, Strategy::Leftmost);
    for h in hs {
        if h.len() != n {
            return Err(EnvelopingError::Precondition(format!("step {h:?} has the wrong rank")));
        }
        let hp = l.concrete(h);
        let rec = record("solenoidal", m, r, sides(&mut red, m, r, [&k, &s, &p, &q], &hp, false));
        out.push(IdentityRecord { h: Some(h.clone()), ..rec });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_m() {
        assert!(matches!(verify_key_identity(1, 2, IdentityMode::Symbolic), Err(EnvelopingError::Precondition(_))));
    }

    #[test]
    fn symbolic_two_two() {
        let recs = verify_key_identity(2, 2, IdentityMode::Symbolic).unwrap();
        assert!(recs[0].pass, "{:?}", recs[0].residue);
        assert!(recs[0].lhs_monomials > 0);
    }
}
