use super::json::AnyModule;
use super::{ActionTerm, Constraint, FiberLabel, GlnRep, JetRep, Layout, ModuleError, PolyWeightModule, Puncture};
use crate::scalar::{Field, Poly, QuadExt, Rational, Ring};

/// A module parameter: a fixed value or a free symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum Param<F> {
    Value(F),
    Symbol(String),
}

impl<F: Field> Param<F> {
    pub fn sym(name: &str) -> Self {
        Param::Symbol(name.into())
    }

    fn poly(&self, layout: &Layout) -> Poly<F> {
        match self {
            Param::Value(v) => layout.constant(v.clone()),
            Param::Symbol(s) => layout.param(s),
        }
    }
}

fn symbols<F>(ps: &[&Param<F>]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for p in ps {
        if let Param::Symbol(s) = p {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
    }
    out
}

fn layout_for<F>(rank: usize, dirs: usize, ps: &[&Param<F>]) -> Layout {
    let names = symbols(ps);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Layout::new(rank, dirs, &refs)
}

fn term<F: Field>(dir: usize, src: usize, tgt: usize, coeff: Poly<F>) -> ActionTerm<F> {
    ActionTerm { dir, src, tgt, coeff, constraint: None }
}

/// `T(α, β)`: `e_k v_s = (s + α k) v_{s+k}`.
pub fn tensor_density<F: Field>(alpha: Param<F>, beta: Param<F>) -> PolyWeightModule<F> {
    let layout = layout_for(1, 1, &[&alpha, &beta]);
    let coeff = layout.s(0) + alpha.poly(&layout) * &layout.m(0);
    let b = beta.poly(&layout);
    PolyWeightModule::new(layout, vec![b], vec![FiberLabel::new("v")], vec![term(0, 0, 0, coeff)], vec![])
        .expect("well-formed")
}

/// `T(U, β)`: `(t^m d_a)(t^s ⊗ u) = s_a t^{s+m} ⊗ u + Σ_p m_p t^{s+m} ⊗ E_{pa} u`.
pub fn tensor_field<F: Field>(u: &GlnRep<F>, beta: &[Param<F>]) -> Result<PolyWeightModule<F>, ModuleError> {
    let n = u.n();
    if beta.len() != n {
        return Err(ModuleError::Invalid(format!("beta needs {n} entries")));
    }
    let refs: Vec<&Param<F>> = beta.iter().collect();
    let layout = layout_for(n, n, &refs);
    let mut terms = Vec::new();
    for a in 0..n {
        for src in 0..u.dim() {
            for tgt in 0..u.dim() {
                let mut c = Poly::zero_in(layout.vars());
                if src == tgt {
                    c = c + layout.s(a);
                }
                for p in 0..n {
                    let e = &u.e(p, a)[tgt][src];
                    if !e.is_zero() {
                        c = c + layout.m::<F>(p).scale(e);
                    }
                }
                terms.push(term(a, src, tgt, c));
            }
        }
    }
    let fiber = u.labels().iter().map(|l| FiberLabel::new(l)).collect();
    let b = beta.iter().map(|p| p.poly(&layout)).collect();
    PolyWeightModule::new(layout, b, fiber, terms, vec![])
}

/// `Ω^k(β) = T(Λ^k V, β)`.
pub fn omega_forms<F: Field>(n: usize, k: usize, beta: &[Param<F>]) -> Result<PolyWeightModule<F>, ModuleError> {
    if k > n {
        return Err(ModuleError::OutOfRange(format!("k = {k} > n = {n}")));
    }
    tensor_field(&GlnRep::wedge(n, k), beta)
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// The module `t^β C[t^{±1}] ⊗ V` with
/// `(t^m d_j)(t^s ⊗ v) = s_j t^{s+m} ⊗ v + Σ_k (m^k / k!) t^{s+m} ⊗ ρ(t^k ∂_j) v`.
pub fn jets_module<F: Field>(rho: &JetRep<F>, beta: &[Param<F>]) -> Result<PolyWeightModule<F>, ModuleError> {
    let n = rho.n();
    if beta.len() != n {
        return Err(ModuleError::Invalid(format!("beta needs {n} entries")));
    }
    let refs: Vec<&Param<F>> = beta.iter().collect();
    let layout = layout_for(n, n, &refs);
    let dim = rho.dim();
    let mut coeffs = vec![vec![vec![Poly::zero_in(layout.vars()); dim]; dim]; n];
    for (j, block) in coeffs.iter_mut().enumerate() {
        for (v, row) in block.iter_mut().enumerate() {
            row[v] = layout.s(j);
        }
    }
    for ((k, j), mat) in rho.entries() {
        let mut mono = layout.constant(F::one());
        let mut kfact = 1;
        for (i, &ki) in k.iter().enumerate() {
            mono = mono * &layout.m::<F>(i).pow(ki);
            kfact *= factorial(ki);
        }
        let scale = F::from(Rational::new(1, kfact));
        for (src, row) in coeffs[*j].iter_mut().enumerate() {
            for (tgt, c) in row.iter_mut().enumerate() {
                let e = &mat[tgt][src];
                if !e.is_zero() {
                    *c = c.clone() + mono.scale(&(scale.clone() * e));
                }
            }
        }
    }
    let mut terms = Vec::new();
    for (j, block) in coeffs.into_iter().enumerate() {
        for (src, row) in block.into_iter().enumerate() {
            for (tgt, c) in row.into_iter().enumerate() {
                terms.push(term(j, src, tgt, c));
            }
        }
    }
    let fiber = (1..=dim).map(|i| FiberLabel::new(&format!("v{i}"))).collect();
    let b = beta.iter().map(|p| p.poly(&layout)).collect();
    PolyWeightModule::new(layout, b, fiber, terms, vec![])
}

/// `T(U, β, γ)` over `W_n^0 = W_{n-1} ⋉ A_{n-1} d_n`: the tensor-field action
/// of `W_{n-1}` plus `(t^m d_n)(t^s ⊗ u) = γ t^{s+m} ⊗ u`.
pub fn gamma_module<F: Field>(u: &GlnRep<F>, beta: &[Param<F>], gamma: Param<F>) -> Result<PolyWeightModule<F>, ModuleError> {
    let base = tensor_field(u, beta)?;
    let r = u.n();
    let mut refs: Vec<&Param<F>> = beta.iter().collect();
    refs.push(&gamma);
    let layout = layout_for(r, r + 1, &refs);
    let mut terms: Vec<ActionTerm<F>> = base
        .terms()
        .iter()
        .map(|t| ActionTerm { coeff: t.coeff.embed(layout.vars()).expect("sub-ring"), ..t.clone() })
        .collect();
    for v in 0..u.dim() {
        terms.push(term(r, v, v, gamma.poly(&layout)));
    }
    let b = beta.iter().map(|p| p.poly(&layout)).collect();
    PolyWeightModule::new(layout, b, base.fiber().to_vec(), terms, vec![])
}

/// `e_k u_s = s u_{s+k}` with the basis vector at weight 0 removed.
pub fn punctured_functions() -> PolyWeightModule<Rational> {
    let layout = Layout::new(1, 1, &[]);
    let coeff = layout.s(0);
    let zero = layout.constant(Rational::zero());
    PolyWeightModule::new(
        layout,
        vec![zero],
        vec![FiberLabel::new("u")],
        vec![term(0, 0, 0, coeff)],
        vec![Puncture { offset: vec![0], labels: vec![0] }],
    )
    .expect("well-formed")
}

/// `e_k u_j = (j - k) u_{j+k} + δ_{k+j,0} k^3 z`, `e_k z = 0`, with `z` at weight 0.
pub fn virasoro_adjoint() -> PolyWeightModule<Rational> {
    let layout = Layout::new(1, 1, &[]);
    let (m, s) = (layout.m::<Rational>(0), layout.s::<Rational>(0));
    let zero = layout.constant(Rational::zero());
    let cubic = m.pow(3);
    PolyWeightModule::new(
        layout,
        vec![zero],
        vec![FiberLabel::new("u"), FiberLabel::localized("z", vec![0])],
        vec![
            term(0, 0, 0, s - m),
            ActionTerm { dir: 0, src: 0, tgt: 1, coeff: cubic, constraint: Some(Constraint::TargetAt(vec![0])) },
        ],
        vec![],
    )
    .expect("well-formed")
}

fn q19(a: (i64, i64), b: (i64, i64)) -> QuadExt {
    QuadExt::new(Rational::new(a.0, a.1), Rational::new(b.0, b.1), 19)
}

/// The length-two extension of `T((-5-√19)/2, 0)` by `T((7-√19)/2, 0)`.
pub fn feigin_fuks_length2() -> PolyWeightModule<QuadExt> {
    let layout = Layout::new(1, 1, &[]);
    let (m, s) = (layout.m::<QuadExt>(0), layout.s::<QuadExt>(0));
    let a = q19((7, 2), (-1, 2));
    let b = q19((-5, 2), (-1, 2));
    let coupling = m.pow(7).scale(&q19((-11, 2), (-5, 4)))
        + m.pow(6).scale(&q19((-31, 2), (-7, 2))) * &s
        + m.pow(5).scale(&q19((-25, 2), (-7, 2))) * &s.pow(2)
        + m.pow(4).scale(&QuadExt::from_i64(-5)) * &s.pow(3)
        + m.pow(3).scale(&QuadExt::from_i64(5)) * &s.pow(4)
        + m.pow(2).scale(&QuadExt::from_i64(2)) * &s.pow(5);
    let zero = layout.constant(QuadExt::zero());
    PolyWeightModule::new(
        layout,
        vec![zero],
        vec![FiberLabel::new("u"), FiberLabel::new("w")],
        vec![
            term(0, 0, 0, s.clone() + m.scale(&a)),
            term(0, 1, 1, s + m.scale(&b)),
            term(0, 1, 0, coupling),
        ],
        vec![],
    )
    .expect("well-formed")
}

pub const PRESETS: [&str; 3] = ["punctured_functions", "virasoro_adjoint", "feigin_fuks_length2"];

pub fn build_preset(name: &str) -> Result<AnyModule, ModuleError> {
    match name {
        "punctured_functions" => Ok(AnyModule::Rational(punctured_functions())),
        "virasoro_adjoint" => Ok(AnyModule::Rational(virasoro_adjoint())),
        "feigin_fuks_length2" => Ok(AnyModule::Quad(feigin_fuks_length2())),
        other => Err(ModuleError::UnknownPreset(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::ModuleVector;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn value<F: Field>(v: &ModuleVector<F>, o: i64, l: usize) -> F {
        v.get(&[o], l).map(|p| p.as_constant().unwrap()).unwrap_or_else(F::zero)
    }

    #[test]
    fn tensor_density_example() {
        let m = tensor_density(Param::Value(q(3)), Param::Value(q(0)));
        let v = m.act_basis(0, &[2], &m.vector(&[1], "v"));
        assert_eq!(value(&v, 3, 0), q(7));
        let z = tensor_density(Param::Value(q(0)), Param::Value(q(0)));
        for k in -3..=3 {
            assert!(z.act_basis(0, &[k], &z.vector(&[0], "v")).is_zero());
        }
    }

    #[test]
    fn preset_examples() {
        let p = punctured_functions();
        assert_eq!(value(&p.act_basis(0, &[2], &p.vector(&[3], "u")), 5, 0), q(3));
        assert!(p.act_basis(0, &[2], &p.vector(&[0], "u")).is_zero());

        let v = virasoro_adjoint();
        let out = v.act_basis(0, &[2], &v.vector(&[-2], "u"));
        assert_eq!(value(&out, 0, 0), q(-4));
        assert_eq!(value(&out, 0, 1), q(8));

        let ff = feigin_fuks_length2();
        let out = ff.act_basis(0, &[1], &ff.vector(&[0], "u"));
        assert_eq!(value(&out, 1, 0), q19((7, 2), (-1, 2)));
    }

    #[test]
    fn natural_tensor_field_formula() {
        let n = 2;
        let beta = vec![Param::Value(q(0)); n];
        let m = tensor_field(&GlnRep::<Rational>::natural(n), &beta).unwrap();
        // (t^m d_a)(t^s ⊗ e_b) = s_a t^{s+m} ⊗ e_b + δ_ab t^{s+m} ⊗ Σ_p m_p e_p
        let (s, mm) = ([2i64, -1], [1i64, 3]);
        for a in 0..n {
            for b in 0..n {
                let out = m.act_basis(a, &mm, &m.vector(&s, &format!("e{}", b + 1)));
                let tgt = [s[0] + mm[0], s[1] + mm[1]];
                for p in 0..n {
                    let mut want = if p == b { s[a] } else { 0 };
                    if a == b {
                        want += mm[p];
                    }
                    let got = out.get(&tgt, p).map(|c| c.as_constant().unwrap()).unwrap_or_else(Rational::zero);
                    assert_eq!(got, q(want));
                }
            }
        }
    }
}
