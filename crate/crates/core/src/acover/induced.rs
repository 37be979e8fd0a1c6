//! The induced `W_1`-action on a cover, symbolic in the step `p` and the
//! weight `w`.
//!
//! A basis `f_1..f_r` of the weight-0 space is transported to weight `w` by
//! `t^w`. In the absolute-offset picture `f(o) = φ(t^{o-w})` the operator
//! `t^p` is the identity and `(e_p f)(o) = e_p f(o-p) - (o-w-p) f(o)`, so the
//! action matrices are read off from one symbolic computation.

use std::collections::BTreeMap;

use super::basis::{cover_basis_with, CoverBasis, CoverOptions};
use super::qpv::{coeffs_into, generic_coeffs, psi_evaluate, require_concrete_rank1, CoverLayout, QuasiPolyVector};
use super::AcoverError;
use crate::linalg::rref;
use crate::modules::{ActionTerm, FiberLabel, Layout, ModuleDoc, PolyWeightModule};
use crate::scalar::{Field, Poly, Rational, Ring, Vars};

pub(crate) fn opw_ring() -> Vars {
    Vars::new(["o", "p", "w"])
}

/// `coeffs[i][l]` is the coefficient of `f_l` (weight `w + p`) in `e_p f_i` (weight `w`),
/// a polynomial in `p, w`.
#[derive(Clone, Debug)]
pub struct InducedAction<F: Field> {
    pub names: Vec<String>,
    pub coeffs: Vec<Vec<Poly<F>>>,
}

impl<F: Field> InducedAction<F> {
    pub fn coefficient(&self, i: usize, l: usize, p: i64, w: i64) -> F {
        self.coeffs[i][l].evaluate(&[F::zero(), F::from_i64(p), F::from_i64(w)])
    }

    /// Rows `"e_p b_i = ..."` in human form.
    pub fn table(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let rhs: Vec<String> = row
                    .iter()
                    .zip(&self.names)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, n)| format!("({c})*{n}"))
                    .collect();
                let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
                format!("e_p {}_w = {rhs}", self.names[i])
            })
            .collect()
    }
}

/// Coordinates of a vector whose entries are polynomials in auxiliary symbols,
/// against constant basis rows. Fails unless the residual vanishes.
fn solve_symbolic<F: Field>(rows: &[Vec<F>], target: &[Poly<F>], ring: &Vars) -> Result<Vec<Poly<F>>, AcoverError> {
    let cols = target.len();
    let ech = rref(rows, cols);
    if ech.rank() < rows.len() {
        return Err(AcoverError::Closure("basis vectors are linearly dependent".into()));
    }
    let mut c = vec![Poly::zero_in(ring); rows.len()];
    for (r, &piv) in ech.pivots.iter().enumerate() {
        if target[piv].is_zero() {
            continue;
        }
        for (i, ci) in c.iter_mut().enumerate() {
            let t = &ech.transform[r][i];
            if !t.is_zero() {
                *ci = ci.clone() + target[piv].scale(t);
            }
        }
    }
    for col in 0..cols {
        let mut r = target[col].clone();
        for (ci, row) in c.iter().zip(rows) {
            if !row[col].is_zero() {
                r = r - ci.scale(&row[col]);
            }
        }
        if !r.is_zero() {
            return Err(AcoverError::Closure(format!("not in the span: residual {r} in column {col}")));
        }
    }
    Ok(c)
}

/// Coordinates (poly part then exceptional part) of a symbolic vector given
/// by `poly[t]` (polynomials in `o` and auxiliaries) and exceptional values.
fn symbolic_coords<F: Field>(
    layout: &CoverLayout,
    degree: u32,
    poly: &[Poly<F>],
    exceptional: &[Vec<Poly<F>>],
) -> Result<Vec<Poly<F>>, AcoverError> {
    let mut out = Vec::new();
    let by_degree: Vec<Vec<Poly<F>>> = poly.iter().map(|p| p.coefficients_in(0)).collect();
    for (t, cs) in by_degree.iter().enumerate() {
        if cs.len() > degree as usize + 1 && cs[degree as usize + 1..].iter().any(|c| !c.is_zero()) {
            return Err(AcoverError::Closure(format!("label {t}: degree in o exceeds the bound {degree}")));
        }
    }
    let ring = poly[0].vars().clone();
    for d in (0..=degree as usize).rev() {
        for &t in &layout.generic_labels {
            out.push(by_degree[t].get(d).cloned().unwrap_or_else(|| Poly::zero_in(&ring)));
        }
    }
    for v in exceptional {
        out.extend(v.iter().cloned());
    }
    Ok(out)
}

fn at<F: Field>(p: &Poly<F>, ring: &Vars, images: &[Poly<F>]) -> Poly<F> {
    p.compose(ring, images)
}

/// `e_p f` for a weight-0 basis vector `f`, with `p` and `w` symbolic, as
/// coordinates in `ring = (o, p, w)`.
fn act_symbolic<F: Field>(
    module: &PolyWeightModule<F>,
    layout: &CoverLayout,
    degree: u32,
    beta: &F,
    f: &QuasiPolyVector<F>,
) -> Result<Vec<Poly<F>>, AcoverError> {
    let ring = opw_ring();
    let (o, p, w) = (Poly::var_at(&ring, 0), Poly::var_at(&ring, 1), Poly::var_at(&ring, 2));
    let k = |x: F| Poly::constant(&ring, x);
    let dim = layout.dim;
    let f_o: Vec<Poly<F>> = f.poly().iter().map(|q| at(q, &ring, std::slice::from_ref(&o))).collect();
    let f_shift: Vec<Poly<F>> = f.poly().iter().map(|q| at(q, &ring, &[o.clone() - &p])).collect();
    let mut g = vec![Poly::zero_in(&ring); dim];
    let s_src = k(beta.clone()) + &o - &p;
    for t in 0..dim {
        if f_shift[t].is_zero() {
            continue;
        }
        for (t2, c) in generic_coeffs(module, &ring, t, None, &p, &s_src).into_iter().enumerate() {
            g[t2] = g[t2].clone() + c * &f_shift[t];
        }
    }
    let lin = o.clone() - &w - &p;
    for t in 0..dim {
        g[t] = g[t].clone() - lin.clone() * &f_o[t];
    }
    let mut exc = Vec::new();
    for &q in &layout.exceptional {
        let qq = k(F::from_i64(q));
        let mut val = vec![Poly::zero_in(&ring); dim];
        for t in 0..dim {
            let src = at(&f.poly()[t], &ring, &[qq.clone() - &p]);
            if src.is_zero() {
                continue;
            }
            let s = k(beta.clone() + F::from_i64(q)) - &p;
            for (t2, c) in coeffs_into(module, &ring, t, q, &p, &s).into_iter().enumerate() {
                val[t2] = val[t2].clone() + c * &src;
            }
        }
        let fq = f.value_at(q - f.weight());
        let lin_q = qq.clone() - &w - &p;
        let mut corr = Vec::with_capacity(dim);
        for t in 0..dim {
            let gq = g[t].compose(&ring, &[qq.clone(), p.clone(), w.clone()]);
            corr.push(val[t].clone() - lin_q.clone() * &k(fq[t].clone()) - gq);
        }
        exc.push(corr);
    }
    symbolic_coords(layout, degree, &g, &exc)
}

/// The action of `e_p` on the cover in the weight-0 basis `basis`, transported
/// to every weight by `t^w`.
pub fn induced_action<F: Field>(
    module: &PolyWeightModule<F>,
    basis: &[QuasiPolyVector<F>],
    names: &[String],
) -> Result<InducedAction<F>, AcoverError> {
    let beta = require_concrete_rank1(module)?;
    let layout = CoverLayout::of(module);
    if basis.iter().any(|b| b.weight() != 0) {
        return Err(AcoverError::Closure("frame vectors must have weight 0".into()));
    }
    let degree = basis.iter().map(QuasiPolyVector::degree).max().unwrap_or(0);
    let rows = basis.iter().map(|b| b.coords(&layout, degree)).collect::<Result<Vec<_>, _>>()?;
    let ring = opw_ring();
    let mut coeffs = Vec::with_capacity(basis.len());
    for f in basis {
        let g = act_symbolic(module, &layout, degree, &beta, f)?;
        coeffs.push(solve_symbolic(&rows, &g, &ring)?);
    }
    Ok(InducedAction { names: names.to_vec(), coeffs })
}

/// Symbolic `ψ(e_{w-j}, u_{j,t})` for generic `j`, in the weight-0 frame.
/// Returns coordinates as polynomials in `j`.
pub fn psi_symbolic<F: Field>(
    module: &PolyWeightModule<F>,
    basis: &[QuasiPolyVector<F>],
    label: usize,
) -> Result<Vec<Poly<F>>, AcoverError> {
    let beta = require_concrete_rank1(module)?;
    let layout = CoverLayout::of(module);
    let degree = basis.iter().map(QuasiPolyVector::degree).max().unwrap_or(0).max(module.max_degree());
    let rows = basis.iter().map(|b| b.coords(&layout, degree)).collect::<Result<Vec<_>, _>>()?;
    let ring = Vars::new(["o", "j"]);
    let (o, j) = (Poly::var_at(&ring, 0), Poly::var_at(&ring, 1));
    let k = |x: F| Poly::constant(&ring, x);
    let dim = layout.dim;
    let s = k(beta) + &j;
    let poly = if module.fiber()[label].at.is_some() {
        vec![Poly::zero_in(&ring); dim]
    } else {
        generic_coeffs(module, &ring, label, None, &(o.clone() - &j), &s)
    };
    let mut exc = Vec::new();
    for &q in &layout.exceptional {
        let qq = k(F::from_i64(q));
        let val = if module.fiber()[label].at.is_some() {
            vec![Poly::zero_in(&ring); dim]
        } else {
            coeffs_into(module, &ring, label, q, &(qq.clone() - &j), &s)
        };
        exc.push(val.into_iter().zip(&poly).map(|(v, g)| v - g.compose(&ring, &[qq.clone(), j.clone()])).collect());
    }
    let target = symbolic_coords(&layout, degree, &poly, &exc)?;
    solve_symbolic(&rows, &target, &ring)
}

/// Re-expresses an action in another basis of the same weight-0 space:
/// `new_i = Σ_a P[i][a] old_a`.
pub fn change_basis<F: Field>(
    module: &PolyWeightModule<F>,
    old: &CoverBasis<F>,
    new: &[QuasiPolyVector<F>],
    names: &[String],
) -> Result<InducedAction<F>, AcoverError> {
    for v in new {
        if !old.contains(v) {
            return Err(AcoverError::Closure("reference vector outside the cover".into()));
        }
    }
    if new.len() != old.rank() {
        return Err(AcoverError::Closure(format!("reference basis has {} vectors, cover rank is {}", new.len(), old.rank())));
    }
    induced_action(module, new, names)
}

/// The assembled cover of a module.
#[derive(Clone, Debug)]
pub struct CoverModule<F: Field> {
    pub source: PolyWeightModule<F>,
    /// Reduced basis of the weight-0 space; `t^w` carries it to weight `w`.
    pub frame: CoverBasis<F>,
    pub action: InducedAction<F>,
    /// The action as a weight module with fiber `b1..br`.
    pub presentation: PolyWeightModule<F>,
    /// `ψ` generators expressed in the frame, as polynomials in `j` (generic)
    /// or constants (exceptional sources).
    pub witnesses: BTreeMap<String, Vec<String>>,
}

fn frame_names(r: usize) -> Vec<String> {
    (1..=r).map(|i| format!("b{i}")).collect()
}

/// Emits `e_p b_{i,w} = Σ_l c_il(p, w) b_{l,w+p}` as a presentation with
/// `m := p` and `s := β + w`.
pub fn emit<F: Field>(module: &PolyWeightModule<F>, action: &InducedAction<F>) -> Result<PolyWeightModule<F>, AcoverError> {
    let beta = require_concrete_rank1(module)?;
    let layout = Layout::new(1, 1, &[]);
    let images = [layout.constant(F::zero()), layout.m(0), layout.s(0) - &layout.constant(beta.clone())];
    let mut terms = Vec::new();
    for (i, row) in action.coeffs.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            if !c.is_zero() {
                terms.push(ActionTerm { dir: 0, src: i, tgt: l, coeff: c.compose(layout.vars(), &images), constraint: None });
            }
        }
    }
    let fiber = action.names.iter().map(|n| FiberLabel::new(n)).collect();
    let b = layout.constant(beta);
    Ok(PolyWeightModule::new(layout, vec![b], fiber, terms, vec![])?)
}

pub fn build_cover<F: Field>(module: &PolyWeightModule<F>, opts: &CoverOptions) -> Result<CoverModule<F>, AcoverError> {
    let frame = cover_basis_with(module, 0, opts)?;
    let names = frame_names(frame.rank());
    let action = induced_action(module, &frame.basis, &names)?;
    let presentation = emit(module, &action)?;
    let mut witnesses = BTreeMap::new();
    for (t, label) in module.fiber().iter().enumerate() {
        if label.at.is_none() {
            let c = psi_symbolic(module, &frame.basis, t)?;
            witnesses.insert(format!("psi(e[w-j],{}[j])", label.name), c.iter().map(Poly::to_string).collect());
        }
    }
    for q in CoverLayout::of(module).exceptional {
        for (t, label) in module.fiber().iter().enumerate() {
            let psi = psi_evaluate(module, -q, q, t)?;
            if psi.is_zero() && !module.exists(&[q], t) {
                continue;
            }
            let c = frame.coordinates(&psi).ok_or_else(|| AcoverError::Closure("generator outside the frame".into()))?;
            witnesses.insert(format!("psi(e[w-{q}],{}[{q}])", label.name), c.iter().map(F::to_string).collect());
        }
    }
    Ok(CoverModule { source: module.clone(), frame, action, presentation, witnesses })
}

impl<F: Field> CoverModule<F> {
    /// The frame transported to weight `w`.
    pub fn basis_at(&self, w: i64) -> Vec<QuasiPolyVector<F>> {
        self.frame.basis.iter().map(|f| f.shift(w)).collect()
    }

    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    /// The presentation document plus the `witnesses` section.
    pub fn to_doc(&self) -> ModuleDoc {
        let mut doc = self.presentation.to_doc();
        doc.witnesses = Some(serde_json::to_value(&self.witnesses).expect("serializable"));
        doc
    }
}

/// Closed-form bases for two presets, with their expected action tables.
pub struct ReferenceFrame {
    pub names: Vec<String>,
    pub basis: Vec<QuasiPolyVector<Rational>>,
    /// `action[i][l]` as text in `p, w`.
    pub action: Vec<Vec<&'static str>>,
    /// Expansion of `ψ(e_{w-j}, u_j)` for the first label, as text in `j`.
    pub psi: Vec<&'static str>,
}

pub fn reference_frame(preset: &str) -> Option<ReferenceFrame> {
    let ring = super::qpv::mode_ring();
    let m = Poly::<Rational>::var_at(&ring, 0);
    let one = Poly::constant(&ring, Rational::one());
    let zero = Poly::zero_in(&ring);
    match preset {
        "punctured_functions" => {
            // θ(t^m) = u_m, with u_0 = 0.
            let theta = QuasiPolyVector::new(0, vec![one], BTreeMap::from([(0, vec![-Rational::one()])]));
            Some(ReferenceFrame { names: vec!["theta".into()], basis: vec![theta], action: vec![vec!["w"]], psi: vec!["j"] })
        }
        "virasoro_adjoint" => {
            // τ(t^m) = m u_m, θ(t^m) = u_m, η(t^m) = δ_{m,0} z
            let tau = QuasiPolyVector::new(0, vec![m, zero.clone()], BTreeMap::new());
            let theta = QuasiPolyVector::new(0, vec![one, zero.clone()], BTreeMap::new());
            let eta = QuasiPolyVector::new(0, vec![zero.clone(), zero], BTreeMap::from([(0, vec![Rational::zero(), Rational::one()])]));
            Some(ReferenceFrame {
                names: vec!["tau".into(), "theta".into(), "eta".into()],
                basis: vec![tau, theta, eta],
                action: vec![vec!["w - 2*p", "2*p^2", "-p^4"], vec!["0", "w - p", "p^3"], vec!["0", "0", "w + p"]],
                psi: vec!["-1", "2*j", "-j^3"],
            })
        }
        _ => None,
    }
}
