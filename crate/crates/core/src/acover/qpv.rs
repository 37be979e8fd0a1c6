//! Quasi-polynomial vectors: elements `φ ∈ Hom(A, M)` of weight `w`, with
//! `φ(t^m) ∈ M_{w+m}` given by a polynomial in `m` per fiber label plus
//! finitely many exceptional corrections.

use std::collections::{BTreeMap, BTreeSet};

use super::AcoverError;
use crate::modules::{Constraint, ModuleVector, PolyWeightModule};
use crate::scalar::{Field, Poly, Ring, Vars};

pub(crate) fn mode_ring() -> Vars {
    Vars::new(["m"])
}

/// `φ(t^m) = Σ_t (poly_t(m) + exceptional[m]_t) u_{w+m,t}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPolyVector<F: Field> {
    weight: i64,
    poly: Vec<Poly<F>>,
    exceptional: BTreeMap<i64, Vec<F>>,
}

impl<F: Field> QuasiPolyVector<F> {
    pub fn zero(weight: i64, dim: usize) -> Self {
        QuasiPolyVector { weight, poly: vec![Poly::zero_in(&mode_ring()); dim], exceptional: BTreeMap::new() }
    }

    pub fn new(weight: i64, poly: Vec<Poly<F>>, exceptional: BTreeMap<i64, Vec<F>>) -> Self {
        let ring = mode_ring();
        let poly = poly.into_iter().map(|p| p.embed(&ring).expect("polynomial in m")).collect();
        let mut out = QuasiPolyVector { weight, poly, exceptional };
        out.exceptional.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        out
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.poly.len()
    }

    pub fn poly(&self) -> &[Poly<F>] {
        &self.poly
    }

    pub fn exceptional(&self) -> &BTreeMap<i64, Vec<F>> {
        &self.exceptional
    }

    pub fn is_zero(&self) -> bool {
        self.exceptional.is_empty() && self.poly.iter().all(Poly::is_zero)
    }

    pub fn degree(&self) -> u32 {
        self.poly.iter().map(Poly::total_degree).max().unwrap_or(0)
    }

    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        assert_eq!(self.weight, other.weight, "weights differ");
        for (a, b) in self.poly.iter_mut().zip(&other.poly) {
            *a = a.clone() + b.scale(c);
        }
        for (m, v) in &other.exceptional {
            let slot = self.exceptional.entry(*m).or_insert_with(|| vec![F::zero(); v.len()]);
            for (a, b) in slot.iter_mut().zip(v) {
                *a = a.clone() + b.clone() * c;
            }
        }
        self.exceptional.retain(|_, v| v.iter().any(|x| !x.is_zero()));
    }

    /// Fiber coordinates of `φ(t^m)`.
    pub fn value_at(&self, m: i64) -> Vec<F> {
        let x = F::from_i64(m);
        let mut out: Vec<F> = self.poly.iter().map(|p| p.evaluate(std::slice::from_ref(&x))).collect();
        if let Some(c) = self.exceptional.get(&m) {
            for (a, b) in out.iter_mut().zip(c) {
                *a = a.clone() + b;
            }
        }
        out
    }

    /// `φ(t^m)` as a vector of `M` at offset `w + m`.
    pub fn vector_at(&self, module: &PolyWeightModule<F>, m: i64) -> ModuleVector<F> {
        let o = self.weight + m;
        let pv = module.layout().pvars();
        let mut out = ModuleVector::zero();
        for (t, c) in self.value_at(m).into_iter().enumerate() {
            if module.exists(&[o], t) {
                out.add(vec![o], t, Poly::constant(pv, c));
            }
        }
        out
    }

    /// `(t^p φ)(t^m) = φ(t^{m+p})`.
    pub fn shift(&self, p: i64) -> Self {
        let ring = mode_ring();
        let image = [Poly::var_at(&ring, 0) + Poly::constant(&ring, F::from_i64(p))];
        QuasiPolyVector {
            weight: self.weight + p,
            poly: self.poly.iter().map(|q| q.compose(&ring, &image)).collect(),
            exceptional: self.exceptional.iter().map(|(m, v)| (m - p, v.clone())).collect(),
        }
    }

    /// Coordinates: coefficients of `m^D, …, m^0` per non-localized label,
    /// then the corrections at every mode `m` with `w + m` exceptional.
    pub fn coords(&self, layout: &CoverLayout, degree: u32) -> Result<Vec<F>, AcoverError> {
        if self.degree() > degree {
            return Err(AcoverError::DegreeExceeded(self.degree()));
        }
        let modes: BTreeSet<i64> = layout.exceptional.iter().map(|q| q - self.weight).collect();
        if let Some(m) = self.exceptional.keys().find(|m| !modes.contains(m)) {
            return Err(AcoverError::Closure(format!("correction at non-exceptional mode {m} (weight {})", self.weight)));
        }
        let mut out = Vec::new();
        for d in (0..=degree).rev() {
            for &t in &layout.generic_labels {
                out.push(coefficient(&self.poly[t], d));
            }
        }
        for m in &modes {
            let v = self.exceptional.get(m);
            for t in 0..self.dim() {
                out.push(v.map_or_else(F::zero, |v| v[t].clone()));
            }
        }
        Ok(out)
    }

    pub fn from_coords(layout: &CoverLayout, weight: i64, degree: u32, c: &[F]) -> Self {
        let ring = mode_ring();
        let dim = layout.dim;
        let mut poly = vec![Poly::zero_in(&ring); dim];
        let mut i = 0;
        for d in (0..=degree).rev() {
            for &t in &layout.generic_labels {
                let mono = Poly::var_at(&ring, 0).pow(d);
                poly[t] = poly[t].clone() + mono.scale(&c[i]);
                i += 1;
            }
        }
        let mut exc = BTreeMap::new();
        for q in &layout.exceptional {
            exc.insert(q - weight, c[i..i + dim].to_vec());
            i += dim;
        }
        QuasiPolyVector::new(weight, poly, exc)
    }
}

fn coefficient<F: Field>(p: &Poly<F>, d: u32) -> F {
    p.terms().find(|(e, _)| e.get(0) as u32 == d).map_or_else(F::zero, |(_, c)| c.clone())
}

/// The column layout shared by every vector of one cover.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverLayout {
    pub dim: usize,
    pub generic_labels: Vec<usize>,
    pub exceptional: Vec<i64>,
}

impl CoverLayout {
    pub fn of<F: Field>(module: &PolyWeightModule<F>) -> Self {
        CoverLayout {
            dim: module.fiber().len(),
            generic_labels: (0..module.fiber().len()).filter(|&t| module.fiber()[t].at.is_none()).collect(),
            exceptional: module.exceptional_offsets().into_iter().map(|o| o[0]).collect(),
        }
    }

    pub fn columns(&self, degree: u32) -> usize {
        (degree as usize + 1) * self.generic_labels.len() + self.exceptional.len() * self.dim
    }
}

pub(crate) fn require_concrete_rank1<F: Field>(module: &PolyWeightModule<F>) -> Result<F, AcoverError> {
    if module.rank() != 1 || module.dirs() != 1 {
        return Err(AcoverError::Unsupported("covers are built for rank-one W_1 modules".into()));
    }
    if !module.is_concrete() {
        return Err(AcoverError::Unsupported("covers need every parameter fixed".into()));
    }
    module.beta()[0].as_constant().ok_or_else(|| AcoverError::Unsupported("β must be a constant".into()))
}

/// Sum of the unconstrained coefficients `t → t'` (or those pinned at
/// source `src`), evaluated at exponent `m_exp` and weight `s`, in `ring`.
/// Localized targets are skipped.
pub(crate) fn generic_coeffs<F: Field>(
    module: &PolyWeightModule<F>,
    ring: &Vars,
    src_label: usize,
    src_offset: Option<i64>,
    m_exp: &Poly<F>,
    s: &Poly<F>,
) -> Vec<Poly<F>> {
    let mut out = vec![Poly::zero_in(ring); module.fiber().len()];
    for term in module.terms().iter().filter(|t| t.dir == 0 && t.src == src_label) {
        let ok = match &term.constraint {
            None => true,
            Some(Constraint::SourceAt(p)) => src_offset == Some(p[0]),
            Some(Constraint::TargetAt(_)) => false,
        };
        if !ok || module.fiber()[term.tgt].at.is_some() {
            continue;
        }
        out[term.tgt] = out[term.tgt].clone() + term.coeff.compose(ring, &[m_exp.clone(), s.clone()]);
    }
    out
}

/// Coefficients `t → t'` landing at the fixed target offset `q` from a
/// source in generic position: unconstrained and `TargetAt(q)` terms,
/// targets that exist at `q`.
pub(crate) fn coeffs_into<F: Field>(
    module: &PolyWeightModule<F>,
    ring: &Vars,
    src_label: usize,
    q: i64,
    m_exp: &Poly<F>,
    s: &Poly<F>,
) -> Vec<Poly<F>> {
    let mut out = vec![Poly::zero_in(ring); module.fiber().len()];
    for term in module.terms().iter().filter(|t| t.dir == 0 && t.src == src_label) {
        let ok = match &term.constraint {
            None => true,
            Some(Constraint::SourceAt(_)) => false,
            Some(Constraint::TargetAt(p)) => p[0] == q,
        };
        if !ok || !module.exists(&[q], term.tgt) {
            continue;
        }
        out[term.tgt] = out[term.tgt].clone() + term.coeff.compose(ring, &[m_exp.clone(), s.clone()]);
    }
    out
}

fn concrete_vec<F: Field>(v: &ModuleVector<F>, o: i64, dim: usize) -> Vec<F> {
    (0..dim).map(|t| v.get(&[o], t).map_or_else(F::zero, |c| c.as_constant().expect("concrete"))).collect()
}

/// `ψ(e_k, u_{j,t})`: the map `t^m ↦ e_{k+m} u_{j,t}`, of weight `k + j`.
pub fn psi_evaluate<F: Field>(
    module: &PolyWeightModule<F>,
    k: i64,
    j: i64,
    label: usize,
) -> Result<QuasiPolyVector<F>, AcoverError> {
    let beta = require_concrete_rank1(module)?;
    let w = k + j;
    let dim = module.fiber().len();
    if !module.exists(&[j], label) {
        return Ok(QuasiPolyVector::zero(w, dim));
    }
    let ring = mode_ring();
    let m = Poly::var_at(&ring, 0);
    let c = |x: F| Poly::constant(&ring, x);
    let poly = generic_coeffs(module, &ring, label, Some(j), &(m + &c(F::from_i64(k))), &c(beta + F::from_i64(j)));
    let mut phi = QuasiPolyVector::new(w, poly, BTreeMap::new());
    let u = module.vector(&[j], &module.fiber()[label].name);
    for q in module.exceptional_offsets() {
        let m0 = q[0] - w;
        let truth = concrete_vec(&module.act_basis(0, &[k + m0], &u), q[0], dim);
        let fit = phi.value_at(m0);
        let corr: Vec<F> = truth.into_iter().zip(fit).map(|(a, b)| a - b).collect();
        phi.exceptional.insert(m0, corr);
    }
    phi.exceptional.retain(|_, v| v.iter().any(|x| !x.is_zero()));
    Ok(phi)
}

/// `(e_p φ)(t^m) = e_p φ(t^m) - m φ(t^{m+p})`.
pub fn e_action<F: Field>(
    module: &PolyWeightModule<F>,
    phi: &QuasiPolyVector<F>,
    p: i64,
) -> Result<QuasiPolyVector<F>, AcoverError> {
    let beta = require_concrete_rank1(module)?;
    let (w, dim) = (phi.weight, phi.dim());
    let ring = mode_ring();
    let m = Poly::var_at(&ring, 0);
    let c = |x: F| Poly::constant(&ring, x);
    let mut poly = vec![Poly::zero_in(&ring); dim];
    let s = m.clone() + &c(beta.clone() + F::from_i64(w));
    for t in 0..dim {
        if phi.poly[t].is_zero() {
            continue;
        }
        let k = generic_coeffs(module, &ring, t, None, &c(F::from_i64(p)), &s);
        for (t2, coeff) in k.into_iter().enumerate() {
            poly[t2] = poly[t2].clone() + coeff * &phi.poly[t];
        }
    }
    let shifted = phi.shift(p);
    for t in 0..dim {
        poly[t] = poly[t].clone() - m.clone() * &shifted.poly[t];
    }
    let mut out = QuasiPolyVector::new(w + p, poly, BTreeMap::new());
    let mut modes = BTreeSet::new();
    for q in module.exceptional_offsets() {
        modes.insert(q[0] - w);
        modes.insert(q[0] - w - p);
    }
    modes.extend(phi.exceptional.keys().copied());
    modes.extend(phi.exceptional.keys().map(|k| k - p));
    for m0 in modes {
        let o = w + p + m0;
        let mut truth = module.act_basis(0, &[p], &phi.vector_at(module, m0));
        truth.add_scaled(&phi.vector_at(module, m0 + p), &Poly::constant(module.layout().pvars(), F::from_i64(-m0)));
        let fit = out.value_at(m0);
        let corr: Vec<F> = concrete_vec(&truth, o, dim).into_iter().zip(fit).map(|(a, b)| a - b).collect();
        out.exceptional.insert(m0, corr);
    }
    out.exceptional.retain(|_, v| v.iter().any(|x| !x.is_zero()));
    Ok(out)
}

/// `π(φ) = φ(1)`.
pub fn pi_map<F: Field>(module: &PolyWeightModule<F>, phi: &QuasiPolyVector<F>) -> ModuleVector<F> {
    phi.vector_at(module, 0)
}
