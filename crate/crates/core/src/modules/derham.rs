//! The de Rham complex `Ω^0(β) → Ω^1(β) → … → Ω^n(β)`.

use serde::Serialize;

use super::{omega_forms, ModuleError, ModuleVector, Param, PolyWeightModule};
use crate::linalg;
use crate::scalar::{Field, Poly};

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `e_a ∧ e_I` as `(sign, J)` in the wedge basis, or `None` if `a ∈ I`.
fn wedge_front(a: usize, idx: &[usize]) -> Option<(i64, Vec<usize>)> {
    if idx.contains(&a) {
        return None;
    }
    let pos = idx.iter().filter(|&&b| b < a).count();
    let mut out = idx.to_vec();
    out.insert(pos, a);
    Some((if pos % 2 == 0 { 1 } else { -1 }, out))
}

/// `d(t^s ⊗ ω) = Σ_a s_a t^s ⊗ (e_a ∧ ω)` from `Ω^k(β)` to `Ω^{k+1}(β)`.
/// Labels index [`wedge_basis`]; `beta` lives in the coefficient ring of `v`.
pub fn de_rham_d<F: Field>(n: usize, k: usize, beta: &[Poly<F>], v: &ModuleVector<F>) -> ModuleVector<F> {
    let src = wedge_basis(n, k);
    let tgt = wedge_basis(n, k + 1);
    let mut out = ModuleVector::zero();
    for ((o, l), c) in v.terms() {
        for a in 0..n {
            let Some((sign, j)) = wedge_front(a, &src[*l]) else { continue };
            let row = tgt.iter().position(|b| *b == j).expect("wedge basis");
            let s = beta[a].clone() + Poly::constant(beta[a].vars(), F::from_i64(o[a]));
            out.add(o.clone(), row, (s * c).scale(&F::from_i64(sign)));
        }
    }
    out
}

/// Dimensions of `H^0..H^n` of the complex restricted to the weight `β + w`.
pub fn de_rham_homology<F: Field>(n: usize, beta: &[F], w: &[i64]) -> Vec<usize> {
    let s: Vec<F> = beta.iter().zip(w).map(|(b, &x)| b.clone() + F::from_i64(x)).collect();
    let dims: Vec<usize> = (0..=n).map(|k| wedge_basis(n, k).len()).collect();
    // ranks[k] = rank of d: Λ^k → Λ^{k+1}
    let ranks: Vec<usize> = (0..=n)
        .map(|k| {
            if k == n {
                return 0;
            }
            let src = wedge_basis(n, k);
            let tgt = wedge_basis(n, k + 1);
            let rows: Vec<Vec<F>> = src
                .iter()
                .map(|i| {
                    let mut row = vec![F::zero(); tgt.len()];
                    for (a, sa) in s.iter().enumerate() {
                        if let Some((sign, j)) = wedge_front(a, i) {
                            let c = tgt.iter().position(|b| *b == j).unwrap();
                            row[c] = row[c].clone() + sa.clone() * &F::from_i64(sign);
                        }
                    }
                    row
                })
                .collect();
            linalg::rank(&rows, tgt.len())
        })
        .collect();
    (0..=n).map(|k| dims[k] - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 }).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct HomomorphismReport {
    pub n: usize,
    pub checked: usize,
    pub failures: Vec<String>,
    pub d_squared_zero: bool,
    pub pass: bool,
}

fn boxes(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Checks `d(x·v) = x·d(v)` for `x = t^m d_a` with `|m|∞ ≤ 2` on every basis
/// form, and `d∘d = 0`. The weight is symbolic: `β` is a vector of free
/// symbols, so a single offset covers every weight.
pub fn de_rham_homomorphism_check<F: Field>(n: usize) -> Result<HomomorphismReport, ModuleError> {
    let beta: Vec<Param<F>> = (1..=n).map(|i| Param::sym(&format!("b{i}"))).collect();
    let omegas: Vec<PolyWeightModule<F>> = (0..=n).map(|k| omega_forms(n, k, &beta)).collect::<Result<_, _>>()?;
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut dd = true;
    let ms = boxes(n, 2);
    for k in 0..=n {
        let (src, tgt) = (&omegas[k], omegas.get(k + 1));
        for o in boxes(n, 0) {
            for (l, name) in src.fiber().iter().enumerate() {
                let v = ModuleVector::basis(o.clone(), l, Poly::constant(src.layout().pvars(), F::one()));
                let dv = de_rham_d(n, k, src.beta(), &v);
                if k + 2 <= n && !de_rham_d(n, k + 1, src.beta(), &dv).is_zero() {
                    dd = false;
                }
                let Some(tgt) = tgt else { continue };
                for m in &ms {
                    for a in 0..n {
                        let lhs = de_rham_d(n, k, src.beta(), &src.act_basis(a, m, &v));
                        let rhs = tgt.act_basis(a, m, &dv);
                        checked += 1;
                        if !lhs.sub(&rhs).is_zero() {
                            failures.push(format!("k={k} o={o:?} {} m={m:?} a={}", name.name, a + 1));
                        }
                    }
                }
            }
        }
    }
    let pass = failures.is_empty() && dd;
    Ok(HomomorphismReport { n, checked, failures, d_squared_zero: dd, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Ring};

    #[test]
    fn basis_sizes() {
        assert_eq!(wedge_basis(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(wedge_basis(2, 0), vec![Vec::<usize>::new()]);
        assert!(wedge_basis(2, 3).is_empty());
    }

    #[test]
    fn homology_only_at_zero_weight() {
        let z = |v: &[i64]| v.iter().map(|&x| Rational::from_i64(x)).collect::<Vec<_>>();
        assert_eq!(de_rham_homology(3, &z(&[0, 0, 0]), &[0, 0, 0]), vec![1, 3, 3, 1]);
        assert_eq!(de_rham_homology(2, &z(&[0, 0]), &[1, 0]), vec![0, 0, 0]);
        let half = vec![Rational::new(1, 2), Rational::zero()];
        assert_eq!(de_rham_homology(2, &half, &[0, 0]), vec![0, 0, 0]);
    }

    #[test]
    fn rank_one_by_hand() {
        // n = 1: d(t^s) = s t^s ⊗ e1.
        let beta = vec![Poly::constant(&crate::scalar::Vars::empty(), Rational::from_i64(0))];
        let v = ModuleVector::basis(vec![3], 0, Poly::constant(&crate::scalar::Vars::empty(), Rational::one()));
        let dv = de_rham_d(1, 0, &beta, &v);
        assert_eq!(dv.get(&[3], 0).unwrap().as_constant(), Some(Rational::from_i64(3)));
    }

    #[test]
    fn commutes_with_the_action() {
        for n in 1..=3 {
            let r = de_rham_homomorphism_check::<Rational>(n).unwrap();
            assert!(r.pass, "{:?}", r.failures);
        }
    }
}
