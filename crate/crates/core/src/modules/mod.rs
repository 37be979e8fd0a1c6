//! Weight modules presented by polynomial action coefficients.
//!
//! A module is `⊕_{o ∈ Z^n} t^{β+o} ⊗ U` with a finite fiber `U`. The
//! generator `t^m d_a` sends the fiber vector `u` at weight `s = β + o` to
//! `Σ coeff(m, s) · u'` at weight `s + m`, summed over the action terms with
//! direction `a` and source `u`. Coefficients are polynomials in
//! `params ++ m ++ s`. Finitely many exceptions are allowed:
//!
//! * a term may carry a [`Constraint`] pinning its source or target offset;
//! * a fiber label may be localized at a single offset;
//! * punctures delete individual basis vectors.

mod check;
mod constructors;
mod derham;
mod json;
mod reps;
mod transform;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::lie::{Rank1Element, WnElement};
use crate::scalar::{Field, Poly, Ring, Vars};

pub use check::{
    annihilates, apply_uea, check_aw_compat, check_module_axioms, weight_report, AnnihilationCertificate,
    AxiomReport, WeightReport, Witness,
};
pub use constructors::{
    build_preset, gamma_module, jets_module, omega_forms, punctured_functions, tensor_density, tensor_field,
    virasoro_adjoint, feigin_fuks_length2, Param, PRESETS,
};
pub use derham::{de_rham_d, de_rham_homology, de_rham_homomorphism_check, wedge_basis, HomomorphismReport};
pub use json::{AnyModule, ModuleDoc};
pub use reps::{GlnRep, JetRep, Matrix, RepFile};
pub use transform::{graded_dual, twist};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("representation check failed: {0}")]
    Relation(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A fiber basis label; `at = Some(o)` means the label exists only at offset `o`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberLabel {
    pub name: String,
    pub at: Option<Vec<i64>>,
}

impl FiberLabel {
    pub fn new(name: &str) -> Self {
        FiberLabel { name: name.into(), at: None }
    }

    pub fn localized(name: &str, at: Vec<i64>) -> Self {
        FiberLabel { name: name.into(), at: Some(at) }
    }
}

/// Restricts a term to a single source or target offset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    SourceAt(Vec<i64>),
    TargetAt(Vec<i64>),
}

impl Constraint {
    fn holds(&self, src: &[i64], m: &[i64]) -> bool {
        match self {
            Constraint::SourceAt(p) => p.as_slice() == src,
            Constraint::TargetAt(p) => src.iter().zip(m).map(|(a, b)| a + b).eq(p.iter().copied()),
        }
    }

    pub fn offset(&self) -> &[i64] {
        match self {
            Constraint::SourceAt(p) | Constraint::TargetAt(p) => p,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionTerm<F: Field> {
    pub dir: usize,
    pub src: usize,
    pub tgt: usize,
    pub coeff: Poly<F>,
    pub constraint: Option<Constraint>,
}

/// Basis vectors `(offset, label)` declared to be zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Puncture {
    pub offset: Vec<i64>,
    pub labels: Vec<usize>,
}

/// Variable layout shared by every coefficient of a module.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    rank: usize,
    dirs: usize,
    params: Vec<String>,
    vars: Vars,
    pvars: Vars,
}

impl Layout {
    /// `rank` lattice directions, `dirs >= rank` derivation directions.
    pub fn new(rank: usize, dirs: usize, params: &[&str]) -> Self {
        assert!(rank >= 1 && dirs >= rank);
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let mut names = params.clone();
        names.extend(m_names("m", rank));
        names.extend(m_names("s", rank));
        Layout { rank, dirs, vars: Vars::new(names), pvars: Vars::new(params.clone()), params }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dirs(&self) -> usize {
        self.dirs
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// `params ++ m ++ s`.
    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// `params` alone.
    pub fn pvars(&self) -> &Vars {
        &self.pvars
    }

    pub fn m<F: Field>(&self, i: usize) -> Poly<F> {
        Poly::var_at(&self.vars, self.params.len() + i)
    }

    pub fn s<F: Field>(&self, i: usize) -> Poly<F> {
        Poly::var_at(&self.vars, self.params.len() + self.rank + i)
    }

    pub fn param<F: Field>(&self, name: &str) -> Poly<F> {
        Poly::var(&self.vars, name)
    }

    pub fn constant<F: Field>(&self, c: F) -> Poly<F> {
        Poly::constant(&self.vars, c)
    }
}

pub(crate) fn m_names(base: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![base.to_string()]
    } else {
        (1..=n).map(|i| format!("{base}{i}")).collect()
    }
}

/// A weight module with polynomial action coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyWeightModule<F: Field> {
    layout: Layout,
    beta: Vec<Poly<F>>,
    fiber: Vec<FiberLabel>,
    terms: Vec<ActionTerm<F>>,
    punctures: Vec<Puncture>,
}

impl<F: Field> PolyWeightModule<F> {
    pub fn new(
        layout: Layout,
        beta: Vec<Poly<F>>,
        fiber: Vec<FiberLabel>,
        terms: Vec<ActionTerm<F>>,
        punctures: Vec<Puncture>,
    ) -> Result<Self, ModuleError> {
        let n = layout.rank;
        if beta.len() != n {
            return Err(ModuleError::Invalid(format!("beta has {} entries, expected {n}", beta.len())));
        }
        let beta = beta
            .into_iter()
            .map(|b| b.embed(&layout.pvars).map_err(|e| ModuleError::Invalid(format!("beta: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut names = BTreeSet::new();
        for f in &fiber {
            if !names.insert(f.name.clone()) {
                return Err(ModuleError::Invalid(format!("duplicate fiber label `{}`", f.name)));
            }
            if f.at.as_ref().is_some_and(|o| o.len() != n) {
                return Err(ModuleError::Invalid(format!("label `{}` localized at a bad offset", f.name)));
            }
        }
        let mut checked = Vec::with_capacity(terms.len());
        for mut t in terms {
            if t.dir >= layout.dirs || t.src >= fiber.len() || t.tgt >= fiber.len() {
                return Err(ModuleError::Invalid(format!("term index out of range: {t:?}")));
            }
            if t.constraint.as_ref().is_some_and(|c| c.offset().len() != n) {
                return Err(ModuleError::Invalid("constraint offset has the wrong rank".into()));
            }
            t.coeff = t.coeff.embed(&layout.vars).map_err(|e| ModuleError::Invalid(format!("coefficient: {e}")))?;
            if !t.coeff.is_zero() {
                checked.push(t);
            }
        }
        for p in &punctures {
            if p.offset.len() != n || p.labels.iter().any(|&l| l >= fiber.len()) {
                return Err(ModuleError::Invalid("bad puncture".into()));
            }
        }
        Ok(PolyWeightModule { layout, beta, fiber, terms: checked, punctures })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn rank(&self) -> usize {
        self.layout.rank
    }

    pub fn dirs(&self) -> usize {
        self.layout.dirs
    }

    pub fn beta(&self) -> &[Poly<F>] {
        &self.beta
    }

    pub fn fiber(&self) -> &[FiberLabel] {
        &self.fiber
    }

    pub fn terms(&self) -> &[ActionTerm<F>] {
        &self.terms
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.fiber.iter().position(|f| f.name == name)
    }

    /// True when every parameter has been fixed.
    pub fn is_concrete(&self) -> bool {
        self.layout.params.is_empty()
    }

    /// Does the basis vector `(offset, label)` exist?
    pub fn exists(&self, offset: &[i64], label: usize) -> bool {
        if let Some(at) = &self.fiber[label].at {
            if at.as_slice() != offset {
                return false;
            }
        }
        !self.punctures.iter().any(|p| p.offset.as_slice() == offset && p.labels.contains(&label))
    }

    /// Offsets where the presentation departs from its generic formula.
    pub fn exceptional_offsets(&self) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        for p in &self.punctures {
            out.insert(p.offset.clone());
        }
        for f in &self.fiber {
            if let Some(at) = &f.at {
                out.insert(at.clone());
            }
        }
        for t in &self.terms {
            if let Some(c) = &t.constraint {
                out.insert(c.offset().to_vec());
            }
        }
        out
    }

    pub fn has_exceptions(&self) -> bool {
        !self.exceptional_offsets().is_empty()
    }

    /// Maximal total degree of the coefficients in `(m, s)`.
    pub fn max_degree(&self) -> u32 {
        let n = self.layout.rank;
        let ms: Vec<String> = m_names("m", n).into_iter().chain(m_names("s", n)).collect();
        let refs: Vec<&str> = ms.iter().map(String::as_str).collect();
        self.terms.iter().map(|t| t.coeff.degree_in_set(&refs)).max().unwrap_or(0)
    }

    /// The coefficient `coeff(m, β + o)` as a polynomial in the parameters.
    pub fn eval_coeff(&self, coeff: &Poly<F>, m: &[i64], o: &[i64]) -> Poly<F> {
        let pv = &self.layout.pvars;
        let mut images: Vec<Poly<F>> = (0..pv.len()).map(|i| Poly::var_at(pv, i)).collect();
        images.extend(m.iter().map(|&x| Poly::constant(pv, F::from_i64(x))));
        images.extend(self.beta.iter().zip(o).map(|(b, &x)| b.clone() + Poly::constant(pv, F::from_i64(x))));
        coeff.compose(pv, &images)
    }

    /// Applies `t^m d_dir` to a vector.
    pub fn act_basis(&self, dir: usize, m: &[i64], v: &ModuleVector<F>) -> ModuleVector<F> {
        let mut out = ModuleVector::zero();
        for ((o, t), c) in &v.terms {
            if !self.exists(o, *t) {
                continue;
            }
            let tgt_off: Vec<i64> = o.iter().zip(m).map(|(a, b)| a + b).collect();
            for term in self.terms.iter().filter(|x| x.dir == dir && x.src == *t) {
                if term.constraint.as_ref().is_some_and(|k| !k.holds(o, m)) {
                    continue;
                }
                if !self.exists(&tgt_off, term.tgt) {
                    continue;
                }
                let coeff = self.eval_coeff(&term.coeff, m, o);
                out.add(tgt_off.clone(), term.tgt, coeff * c);
            }
        }
        out
    }

    /// Action of a `W_n` element.
    pub fn act_wn(&self, x: &WnElement<F>, v: &ModuleVector<F>) -> Result<ModuleVector<F>, ModuleError> {
        if x.algebra().n() != self.layout.dirs {
            return Err(ModuleError::Mismatch(format!("W_{} element on a module over W_{}", x.algebra().n(), self.layout.dirs)));
        }
        let mut out = ModuleVector::zero();
        for ((r, a), c) in x.terms() {
            let m = &r.coords()[..self.layout.rank];
            if r.coords()[self.layout.rank..].iter().any(|&z| z != 0) {
                return Err(ModuleError::Mismatch("exponent outside the module's lattice".into()));
            }
            out.add_scaled(&self.act_basis(*a, m, v), &Poly::constant(&self.layout.pvars, c.clone()));
        }
        Ok(out)
    }

    /// Action of a `W_1` element `Σ c_k e_k` on a rank-one module.
    pub fn act_rank1(&self, x: &Rank1Element<F>, v: &ModuleVector<F>) -> Result<ModuleVector<F>, ModuleError> {
        if self.layout.rank != 1 || x.algebra().lattice().rank() != 1 || x.algebra().lattice().is_symbolic() {
            return Err(ModuleError::Mismatch("rank-one action needs W_1 and a rank-one module".into()));
        }
        let mut out = ModuleVector::zero();
        for (k, c) in x.terms() {
            out.add_scaled(&self.act_basis(0, k.coords(), v), &Poly::constant(&self.layout.pvars, c.clone()));
        }
        Ok(out)
    }

    /// The basis vector at `offset` with the named label.
    pub fn vector(&self, offset: &[i64], label: &str) -> ModuleVector<F> {
        let l = self.label_index(label).unwrap_or_else(|| panic!("no label `{label}`"));
        ModuleVector::basis(offset.to_vec(), l, Poly::constant(&self.layout.pvars, F::one()))
    }
}

/// A finite combination of basis vectors `(offset, label)`; coefficients are
/// polynomials in the module parameters (constants for concrete modules).
#[derive(Clone, PartialEq)]
pub struct ModuleVector<F: Field> {
    terms: BTreeMap<(Vec<i64>, usize), Poly<F>>,
}

impl<F: Field> ModuleVector<F> {
    pub fn zero() -> Self {
        ModuleVector { terms: BTreeMap::new() }
    }

    pub fn basis(offset: Vec<i64>, label: usize, c: Poly<F>) -> Self {
        let mut v = Self::zero();
        v.add(offset, label, c);
        v
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<i64>, usize), Poly<F>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, offset: &[i64], label: usize) -> Option<&Poly<F>> {
        self.terms.get(&(offset.to_vec(), label))
    }

    pub fn add(&mut self, offset: Vec<i64>, label: usize, c: Poly<F>) {
        if c.is_zero() {
            return;
        }
        let key = (offset, label);
        let v = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleVector<F>, c: &Poly<F>) {
        for ((o, l), v) in &other.terms {
            self.add(o.clone(), *l, v.clone() * c);
        }
    }

    pub fn sub(&self, other: &ModuleVector<F>) -> ModuleVector<F> {
        let mut out = self.clone();
        for ((o, l), v) in &other.terms {
            out.add(o.clone(), *l, -v.clone());
        }
        out
    }

    pub fn display_with(&self, module: &PolyWeightModule<F>) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((o, l), c)| {
                let idx: Vec<String> = o.iter().map(i64::to_string).collect();
                format!("({c})*{}[{}]", module.fiber[*l].name, idx.join(","))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<F: Field> fmt::Debug for ModuleVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(k, v)| (k, v.to_string()))).finish()
    }
}

/// A vector at a symbolic weight: entries `(weight, label, coefficient)`
/// with weight and coefficient polynomials in a caller-chosen ring.
#[derive(Clone, Debug)]
pub(crate) struct GenericVector<F: Field> {
    pub entries: Vec<(Vec<Poly<F>>, usize, Poly<F>)>,
}

impl<F: Field> GenericVector<F> {
    pub fn new(weight: Vec<Poly<F>>, label: usize, c: Poly<F>) -> Self {
        GenericVector { entries: vec![(weight, label, c)] }
    }

    pub fn empty() -> Self {
        GenericVector { entries: Vec::new() }
    }

    pub fn push(&mut self, weight: Vec<Poly<F>>, label: usize, c: Poly<F>) {
        if c.is_zero() {
            return;
        }
        if let Some(slot) = self.entries.iter_mut().find(|(w, l, _)| *l == label && *w == weight) {
            slot.2 = slot.2.clone() + c;
        } else {
            self.entries.push((weight, label, c));
        }
        self.entries.retain(|e| !e.2.is_zero());
    }

    pub fn add_scaled(&mut self, other: &GenericVector<F>, c: &Poly<F>) {
        for (w, l, v) in &other.entries {
            self.push(w.clone(), *l, v.clone() * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<F: Field> PolyWeightModule<F> {
    /// Images of `params` inside `ring` (parameters must be present there by name).
    pub(crate) fn param_images(&self, ring: &Vars) -> Vec<Poly<F>> {
        self.layout.params.iter().map(|p| Poly::var(ring, p)).collect()
    }

    /// Generic action of `t^m d_dir` at symbolic weights: unconstrained
    /// terms between non-localized labels only.
    pub(crate) fn apply_generic(
        &self,
        ring: &Vars,
        params: &[Poly<F>],
        dir: usize,
        m: &[Poly<F>],
        v: &GenericVector<F>,
    ) -> GenericVector<F> {
        let mut out = GenericVector::empty();
        for (w, label, c) in &v.entries {
            if self.fiber[*label].at.is_some() {
                continue;
            }
            let tw: Vec<Poly<F>> = w.iter().zip(m).map(|(a, b)| a.clone() + b).collect();
            for term in self.terms.iter().filter(|t| t.dir == dir && t.src == *label) {
                if term.constraint.is_some() || self.fiber[term.tgt].at.is_some() {
                    continue;
                }
                let mut images = params.to_vec();
                images.extend(m.iter().cloned());
                images.extend(w.iter().cloned());
                let coeff = term.coeff.compose(ring, &images);
                out.push(tw.clone(), term.tgt, coeff * c);
            }
        }
        out
    }
}
