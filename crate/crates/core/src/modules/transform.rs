//! Twisting by lattice automorphisms and graded duals.

use std::collections::BTreeMap;

use super::{ActionTerm, Constraint, FiberLabel, ModuleError, PolyWeightModule, Puncture};
use crate::lie::LatticeAutomorphism;
use crate::scalar::{Field, Poly};

fn mat_vec(g: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    g.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn map_constraint(c: &Constraint, f: impl Fn(&[i64]) -> Vec<i64>) -> Constraint {
    match c {
        Constraint::SourceAt(p) => Constraint::SourceAt(f(p)),
        Constraint::TargetAt(p) => Constraint::TargetAt(f(p)),
    }
}

/// `M^g`: the same space with `x` acting as `g·x`. Weights become `g⁻¹ s`
/// and `c^g_a(m, s) = Σ_b (g⁻¹)_{ab} c_b(g m, g s)`, so `(M^g)^h = M^{gh}`.
pub fn twist<F: Field>(module: &PolyWeightModule<F>, g: &LatticeAutomorphism) -> Result<PolyWeightModule<F>, ModuleError> {
    let n = module.rank();
    if module.dirs() != n {
        return Err(ModuleError::Unsupported("twists need a module over the full W_n".into()));
    }
    if g.n() != n {
        return Err(ModuleError::Mismatch(format!("automorphism of Z^{} on a rank {n} module", g.n())));
    }
    let layout = module.layout().clone();
    let vars = layout.vars();
    let np = layout.params().len();
    let (gm, gi) = (g.matrix(), g.inverse_matrix());
    let mut images: Vec<Poly<F>> = (0..np).map(|i| Poly::var_at(vars, i)).collect();
    for block in 0..2 {
        for row in gm {
            let mut p = Poly::zero_in(vars);
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    let v = if block == 0 { layout.m::<F>(j) } else { layout.s::<F>(j) };
                    p = p + v.scale(&F::from_i64(x));
                }
            }
            images.push(p);
        }
    }
    let unmap = |p: &[i64]| mat_vec(gi, p);
    let mut merged: BTreeMap<(usize, usize, usize, Option<Constraint>), Poly<F>> = BTreeMap::new();
    for t in module.terms() {
        let moved = t.coeff.compose(vars, &images);
        let constraint = t.constraint.as_ref().map(|c| map_constraint(c, unmap));
        for (a, row) in gi.iter().enumerate() {
            let w = row[t.dir];
            if w == 0 {
                continue;
            }
            let slot = merged.entry((a, t.src, t.tgt, constraint.clone())).or_insert_with(|| Poly::zero_in(vars));
            *slot = slot.clone() + moved.scale(&F::from_i64(w));
        }
    }
    let terms = merged
        .into_iter()
        .map(|((dir, src, tgt, constraint), coeff)| ActionTerm { dir, src, tgt, coeff, constraint })
        .collect();
    let beta = gi
        .iter()
        .map(|row| {
            let mut p = Poly::zero_in(layout.pvars());
            for (b, &x) in module.beta().iter().zip(row) {
                p = p + b.scale(&F::from_i64(x));
            }
            p
        })
        .collect();
    let fiber = module
        .fiber()
        .iter()
        .map(|f| FiberLabel { name: f.name.clone(), at: f.at.as_deref().map(unmap) })
        .collect();
    let punctures = module.punctures().iter().map(|p| Puncture { offset: unmap(&p.offset), labels: p.labels.clone() }).collect();
    PolyWeightModule::new(layout, beta, fiber, terms, punctures)
}

/// The graded dual `⊕ M_λ^*` with `(x f)(v) = -f(x v)`:
/// `c*_{t→t'}(m, s) = -c_{t'→t}(m, -s-m)`, `β ↦ -β`, offsets negated.
pub fn graded_dual<F: Field>(module: &PolyWeightModule<F>) -> Result<PolyWeightModule<F>, ModuleError> {
    let layout = module.layout().clone();
    let vars = layout.vars();
    let (np, n) = (layout.params().len(), layout.rank());
    let mut images: Vec<Poly<F>> = (0..np).map(|i| Poly::var_at(vars, i)).collect();
    images.extend((0..n).map(|i| layout.m::<F>(i)));
    images.extend((0..n).map(|i| -layout.s::<F>(i) - &layout.m::<F>(i)));
    let neg = |p: &[i64]| p.iter().map(|x| -x).collect::<Vec<_>>();
    let terms = module
        .terms()
        .iter()
        .map(|t| ActionTerm {
            dir: t.dir,
            src: t.tgt,
            tgt: t.src,
            coeff: -t.coeff.compose(vars, &images),
            constraint: t.constraint.as_ref().map(|c| match c {
                Constraint::SourceAt(p) => Constraint::TargetAt(neg(p)),
                Constraint::TargetAt(p) => Constraint::SourceAt(neg(p)),
            }),
        })
        .collect();
    let beta = module.beta().iter().map(|b| -b.clone()).collect();
    let fiber = module
        .fiber()
        .iter()
        .map(|f| FiberLabel { name: f.name.clone(), at: f.at.as_deref().map(neg) })
        .collect();
    let punctures = module.punctures().iter().map(|p| Puncture { offset: neg(&p.offset), labels: p.labels.clone() }).collect();
    PolyWeightModule::new(layout, beta, fiber, terms, punctures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{tensor_field, virasoro_adjoint, GlnRep, ModuleVector, Param};
    use crate::scalar::{Rational, Ring};

    #[test]
    fn double_dual_is_identity() {
        let v = virasoro_adjoint();
        assert_eq!(graded_dual(&graded_dual(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn dual_pairing() {
        // (e_m f)(v) = -f(e_m v) on the virasoro preset.
        let v = virasoro_adjoint();
        let d = graded_dual(&v).unwrap();
        let one = |o: i64, l: usize| ModuleVector::basis(vec![o], l, Poly::constant(v.layout().pvars(), Rational::one()));
        for m in -3..=3 {
            for o in -4..=4 {
                for l in 0..2 {
                    let xv = v.act_basis(0, &[m], &one(o, l));
                    for l2 in 0..2 {
                        // f = dual of (o+m, l2), sitting at offset -(o+m)
                        let xf = d.act_basis(0, &[m], &one(-(o + m), l2));
                        let lhs = xf.get(&[-o], l).map(|p| p.as_constant().unwrap()).unwrap_or_else(Rational::zero);
                        let rhs = xv.get(&[o + m], l2).map(|p| p.as_constant().unwrap()).unwrap_or_else(Rational::zero);
                        assert_eq!(lhs, -rhs, "m={m} o={o} {l}->{l2}");
                    }
                }
            }
        }
    }

    #[test]
    fn twist_composition() {
        let u = GlnRep::<Rational>::natural(2);
        let m = tensor_field(&u, &[Param::sym("b1"), Param::sym("b2")]).unwrap();
        let g = LatticeAutomorphism::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        let h = LatticeAutomorphism::new(vec![vec![1, 0], vec![3, 1]]).unwrap();
        let lhs = twist(&twist(&m, &g).unwrap(), &h).unwrap();
        let rhs = twist(&m, &g.compose(&h)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(twist(&m, &LatticeAutomorphism::identity(2)).unwrap().terms().len(), m.terms().len());
    }
}
