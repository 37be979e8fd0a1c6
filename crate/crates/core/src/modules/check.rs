//! Certificates: module axioms, AW-compatibility, annihilation by
//! differentiators, weight tables.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{m_names, ActionTerm, GenericVector, Layout, ModuleError, ModuleVector, PolyWeightModule, Puncture};
use crate::enveloping::UeaElement;
use crate::scalar::{binomial, Field, Poly, Rational, Ring, Vars};

impl<F: Field> PolyWeightModule<F> {
    /// Fixes some parameters; the rest stay symbolic.
    pub fn specialize(&self, values: &BTreeMap<String, F>) -> Result<Self, ModuleError> {
        for k in values.keys() {
            if !self.layout().params().contains(k) {
                return Err(ModuleError::Invalid(format!("no parameter `{k}`")));
            }
        }
        let old = self.layout();
        let keep: Vec<&str> = old.params().iter().filter(|p| !values.contains_key(*p)).map(String::as_str).collect();
        let layout = Layout::new(old.rank(), old.dirs(), &keep);
        let image = |vars: &Vars, name: &str| match values.get(name) {
            Some(v) => Poly::constant(vars, v.clone()),
            None => Poly::var(vars, name),
        };
        let full: Vec<Poly<F>> = old.vars().names().iter().map(|n| image(layout.vars(), n)).collect();
        let short: Vec<Poly<F>> = old.pvars().names().iter().map(|n| image(layout.pvars(), n)).collect();
        let terms = self
            .terms()
            .iter()
            .map(|t| ActionTerm { coeff: t.coeff.compose(layout.vars(), &full), ..t.clone() })
            .collect();
        let beta = self.beta().iter().map(|b| b.compose(layout.pvars(), &short)).collect();
        PolyWeightModule::new(layout, beta, self.fiber().to_vec(), terms, self.punctures().to_vec())
    }

    /// Removes basis vectors; used to build corrupted controls and holes.
    pub fn with_punctures(&self, extra: Vec<Puncture>) -> Result<Self, ModuleError> {
        let mut p = self.punctures().to_vec();
        p.extend(extra);
        PolyWeightModule::new(self.layout().clone(), self.beta().to_vec(), self.fiber().to_vec(), self.terms().to_vec(), p)
    }

    fn basis_vector(&self, o: &[i64], l: usize) -> ModuleVector<F> {
        ModuleVector::basis(o.to_vec(), l, Poly::constant(self.layout().pvars(), F::one()))
    }
}

fn show_generic<F: Field>(module: &PolyWeightModule<F>, v: &GenericVector<F>) -> String {
    v.entries
        .iter()
        .map(|(w, l, c)| {
            let w: Vec<String> = w.iter().map(|p| p.to_string()).collect();
            format!("({c})*{}[{}]", module.fiber()[*l].name, w.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn sub_generic<F: Field>(a: &GenericVector<F>, b: &GenericVector<F>, ring: &Vars) -> GenericVector<F> {
    let mut out = a.clone();
    out.add_scaled(b, &Poly::constant(ring, -F::one()));
    out
}

pub(crate) fn box_points(center: &[i64], r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &c in center {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (c - r..=c + r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub pass: bool,
    pub symbolic_checked: usize,
    pub symbolic_residues: Vec<String>,
    pub weight_ok: bool,
    pub window_checked: usize,
    pub window_failures: Vec<String>,
}

/// Checks `[x_a(m), x_b(m')] v = m'_a x_b(m+m') v - m_b x_a(m+m') v` with
/// `x_a(m) = t^m d_a` and `m, m', s` symbolic, plus `d_a v = s_a v`.
/// Near exceptional offsets the same identities are checked on a concrete
/// window of radius `radius` (rank one) or 1 (higher rank).
pub fn check_module_axioms<F: Field>(module: &PolyWeightModule<F>, radius: i64) -> AxiomReport {
    let layout = module.layout();
    let (n, dirs) = (layout.rank(), layout.dirs());
    let mut names: Vec<String> = layout.params().to_vec();
    names.extend(m_names("m", n));
    names.extend(m_names("mp", n));
    names.extend(m_names("s", n));
    let ring = Vars::new(names);
    let np = layout.params().len();
    let params = module.param_images(&ring);
    let m: Vec<Poly<F>> = (0..n).map(|i| Poly::var_at(&ring, np + i)).collect();
    let mp: Vec<Poly<F>> = (0..n).map(|i| Poly::var_at(&ring, np + n + i)).collect();
    let s: Vec<Poly<F>> = (0..n).map(|i| Poly::var_at(&ring, np + 2 * n + i)).collect();
    let sum: Vec<Poly<F>> = m.iter().zip(&mp).map(|(a, b)| a.clone() + b).collect();
    let zero = Poly::zero_in(&ring);
    let coord = |v: &[Poly<F>], a: usize| if a < n { v[a].clone() } else { zero.clone() };
    let one = Poly::constant(&ring, F::one());

    let mut residues = Vec::new();
    let mut checked = 0;
    let mut weight_ok = true;
    for (u, label) in module.fiber().iter().enumerate() {
        if label.at.is_some() {
            continue;
        }
        let v = GenericVector::new(s.clone(), u, one.clone());
        for a in 0..dirs {
            if a < n {
                let zeros = vec![zero.clone(); n];
                let mut d = module.apply_generic(&ring, &params, a, &zeros, &v);
                d.add_scaled(&v, &-s[a].clone());
                if !d.is_zero() {
                    weight_ok = false;
                    residues.push(format!("weight, d{} on {}: {}", a + 1, label.name, show_generic(module, &d)));
                }
            }
            for b in 0..dirs {
                let bv = module.apply_generic(&ring, &params, b, &mp, &v);
                let av = module.apply_generic(&ring, &params, a, &m, &v);
                let comm = sub_generic(
                    &module.apply_generic(&ring, &params, a, &m, &bv),
                    &module.apply_generic(&ring, &params, b, &mp, &av),
                    &ring,
                );
                let mut rhs = GenericVector::empty();
                rhs.add_scaled(&module.apply_generic(&ring, &params, b, &sum, &v), &coord(&mp, a));
                rhs.add_scaled(&module.apply_generic(&ring, &params, a, &sum, &v), &-coord(&m, b));
                let r = sub_generic(&comm, &rhs, &ring);
                checked += 1;
                if !r.is_zero() {
                    residues.push(format!("[d{}, d{}] on {}: {}", a + 1, b + 1, label.name, show_generic(module, &r)));
                }
            }
        }
    }

    let (window_checked, window_failures, window_weight_ok) = check_window(module, radius);
    AxiomReport {
        pass: residues.is_empty() && window_failures.is_empty() && weight_ok && window_weight_ok,
        symbolic_checked: checked,
        symbolic_residues: residues,
        weight_ok: weight_ok && window_weight_ok,
        window_checked,
        window_failures,
    }
}

fn exceptional_window<F: Field>(module: &PolyWeightModule<F>, radius: i64) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let exc = module.exceptional_offsets();
    if exc.is_empty() {
        return (vec![], vec![]);
    }
    let n = module.rank();
    if n == 1 {
        let lo = exc.iter().map(|o| o[0]).min().unwrap() - 2 * radius;
        let hi = exc.iter().map(|o| o[0]).max().unwrap() + 2 * radius;
        ((lo..=hi).map(|o| vec![o]).collect(), (-radius..=radius).map(|x| vec![x]).collect())
    } else {
        let mut offs: Vec<Vec<i64>> = exc.iter().flat_map(|e| box_points(e, 2)).collect();
        offs.sort();
        offs.dedup();
        (offs, box_points(&vec![0; n], 1))
    }
}

fn check_window<F: Field>(module: &PolyWeightModule<F>, radius: i64) -> (usize, Vec<String>, bool) {
    let (offs, ms) = exceptional_window(module, radius);
    let (n, dirs) = (module.rank(), module.dirs());
    let pv = module.layout().pvars();
    let int = |x: i64| Poly::constant(pv, F::from_i64(x));
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut weight_ok = true;
    for o in &offs {
        for l in 0..module.fiber().len() {
            if !module.exists(o, l) {
                continue;
            }
            let v = module.basis_vector(o, l);
            for a in 0..n {
                let mut d = module.act_basis(a, &vec![0; n], &v);
                let s = module.beta()[a].clone() + &int(o[a]);
                d.add_scaled(&v, &-s);
                if !d.is_zero() {
                    weight_ok = false;
                    failures.push(format!("weight: d{} on {}[{o:?}]", a + 1, module.fiber()[l].name));
                }
            }
            for m in &ms {
                for mp in &ms {
                    let sum: Vec<i64> = m.iter().zip(mp).map(|(x, y)| x + y).collect();
                    for a in 0..dirs {
                        for b in 0..dirs {
                            let lhs = module
                                .act_basis(a, m, &module.act_basis(b, mp, &v))
                                .sub(&module.act_basis(b, mp, &module.act_basis(a, m, &v)));
                            let mut rhs = ModuleVector::zero();
                            if a < n {
                                rhs.add_scaled(&module.act_basis(b, &sum, &v), &int(mp[a]));
                            }
                            if b < n {
                                rhs.add_scaled(&module.act_basis(a, &sum, &v), &int(-m[b]));
                            }
                            checked += 1;
                            let r = lhs.sub(&rhs);
                            if !r.is_zero() {
                                failures.push(format!(
                                    "[t^{m:?} d{}, t^{mp:?} d{}] on {}[{o:?}]: {}",
                                    a + 1,
                                    b + 1,
                                    module.fiber()[l].name,
                                    r.display_with(module)
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    (checked, failures, weight_ok)
}

/// Checks `A_a(m, s + r) - A_a(m, s) = r_a I`, where `A_a(m, s)` is the matrix
/// of `t^m d_a` between fibers. Returns the non-vanishing entries.
pub fn check_aw_compat<F: Field>(module: &PolyWeightModule<F>) -> Result<Vec<String>, ModuleError> {
    if module.has_exceptions() {
        return Err(ModuleError::Unsupported("AW-compatibility is checked for presentations without exceptions".into()));
    }
    let layout = module.layout();
    let n = layout.rank();
    let mut names: Vec<String> = layout.vars().names().to_vec();
    names.extend(m_names("r", n));
    let ring = Vars::new(names);
    let base = layout.vars().len();
    let np = layout.params().len();
    let id: Vec<Poly<F>> = (0..base).map(|i| Poly::var_at(&ring, i)).collect();
    let mut shifted = id.clone();
    for i in 0..n {
        shifted[np + n + i] = shifted[np + n + i].clone() + Poly::var_at(&ring, base + i);
    }
    let dim = module.fiber().len();
    let mut out = Vec::new();
    for a in 0..layout.dirs() {
        for src in 0..dim {
            for tgt in 0..dim {
                let mut diff = Poly::zero_in(&ring);
                for t in module.terms().iter().filter(|t| t.dir == a && t.src == src && t.tgt == tgt) {
                    diff = diff + t.coeff.compose(&ring, &shifted) - t.coeff.compose(&ring, &id);
                }
                if src == tgt && a < n {
                    diff = diff - Poly::var_at(&ring, base + a);
                }
                if !diff.is_zero() {
                    out.push(format!("d{} {}->{}: {diff}", a + 1, module.fiber()[src].name, module.fiber()[tgt].name));
                }
            }
        }
    }
    Ok(out)
}

/// Applies `Σ c_M M` with each monomial acting rightmost factor first.
pub fn apply_uea<F: Field>(
    module: &PolyWeightModule<F>,
    x: &UeaElement<F>,
    v: &ModuleVector<F>,
) -> Result<ModuleVector<F>, ModuleError> {
    let lat = x.algebra().lattice();
    if module.rank() != 1 || module.dirs() != 1 || lat.rank() != 1 || lat.is_symbolic() {
        return Err(ModuleError::Mismatch("enveloping action needs W_1 and a rank-one module".into()));
    }
    let mut out = ModuleVector::zero();
    for (mono, c) in x.terms() {
        let mut w = v.clone();
        for f in mono.factors().iter().rev() {
            w = module.act_basis(0, f.coords(), &w);
        }
        out.add_scaled(&w, &Poly::constant(module.layout().pvars(), c.clone()));
    }
    Ok(out)
}

/// `Ω^{(m,h)}_{k,s} v` on a concrete basis vector.
pub(crate) fn differentiator_on<F: Field>(
    module: &PolyWeightModule<F>,
    m: u32,
    h: i64,
    k: i64,
    s: i64,
    v: &ModuleVector<F>,
) -> ModuleVector<F> {
    let mut out = ModuleVector::zero();
    for i in 0..=m {
        let c = binomial(m, i) * if i % 2 == 0 { 1 } else { -1 };
        let i = i as i64;
        let w = module.act_basis(0, &[k - i * h], &module.act_basis(0, &[s + i * h], v));
        out.add_scaled(&w, &Poly::constant(module.layout().pvars(), F::from_i64(c)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub k: i64,
    pub s: i64,
    /// Offset of the basis vector; its weight is `β + p`.
    pub p: i64,
    pub params: BTreeMap<String, String>,
    pub label: String,
    pub image: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnihilationCertificate {
    pub m: u32,
    pub h: i64,
    pub generic_residues: Vec<String>,
    pub window_checked: usize,
    pub window_failures: Vec<String>,
    pub witness: Option<Witness>,
    pub annihilates: bool,
}

fn param_grid<F: Field>(params: &[String]) -> Vec<BTreeMap<String, F>> {
    let values = [1i64, -1, 2, 0, 3, -2];
    let mut out = vec![BTreeMap::new()];
    for p in params {
        out = out
            .into_iter()
            .flat_map(|a: BTreeMap<String, F>| {
                values.iter().map(move |&v| {
                    let mut b = a.clone();
                    b.insert(p.clone(), F::from(Rational::new(v, 3)));
                    b
                })
            })
            .collect();
        if out.len() > 400 {
            out.truncate(400);
        }
    }
    out
}

fn find_witness<F: Field>(module: &PolyWeightModule<F>, m: u32, h: i64) -> Option<Witness> {
    for assignment in param_grid::<F>(module.layout().params()) {
        let concrete = module.specialize(&assignment).ok()?;
        for p in -3..=3 {
            for k in -3..=3 {
                for s in -3..=3 {
                    for l in 0..concrete.fiber().len() {
                        if !concrete.exists(&[p], l) {
                            continue;
                        }
                        let img = differentiator_on(&concrete, m, h, k, s, &concrete.basis_vector(&[p], l));
                        if !img.is_zero() {
                            return Some(Witness {
                                k,
                                s,
                                p,
                                params: assignment.iter().map(|(a, b)| (a.clone(), b.to_string())).collect(),
                                label: concrete.fiber()[l].name.clone(),
                                image: img.display_with(&concrete),
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Does `Ω^{(m,h)}_{k,s} = Σ_i (-1)^i C(m,i) e_{k-ih} e_{s+ih}` act by zero
/// for all `k, s`? The generic part is decided symbolically in `k, s` and the
/// weight `p`; exceptional offsets are checked on a concrete window.
pub fn annihilates<F: Field>(
    module: &PolyWeightModule<F>,
    m: u32,
    h: i64,
    window: i64,
) -> Result<AnnihilationCertificate, ModuleError> {
    if module.rank() != 1 || module.dirs() != 1 {
        return Err(ModuleError::Unsupported("differentiators act on rank-one modules".into()));
    }
    let params = module.layout().params();
    if params.iter().any(|p| p == "k" || p == "s" || p == "p") {
        return Err(ModuleError::Invalid("parameters may not be named k, s or p".into()));
    }
    let mut names = params.to_vec();
    names.extend(["k", "s", "p"].map(String::from));
    let ring = Vars::new(names);
    let np = params.len();
    let pimg = module.param_images(&ring);
    let (k, s, p) = (Poly::var_at(&ring, np), Poly::var_at(&ring, np + 1), Poly::var_at(&ring, np + 2));
    let hh = |i: i64| Poly::constant(&ring, F::from_i64(i * h));
    let mut residues = Vec::new();
    for (u, label) in module.fiber().iter().enumerate() {
        if label.at.is_some() {
            continue;
        }
        let v = GenericVector::new(vec![p.clone()], u, Poly::constant(&ring, F::one()));
        let mut total = GenericVector::empty();
        for i in 0..=m {
            let c = binomial(m, i) * if i % 2 == 0 { 1 } else { -1 };
            let i = i as i64;
            let w = module.apply_generic(&ring, &pimg, 0, &[s.clone() + &hh(i)], &v);
            let w = module.apply_generic(&ring, &pimg, 0, &[k.clone() - &hh(i)], &w);
            total.add_scaled(&w, &Poly::constant(&ring, F::from_i64(c)));
        }
        if !total.is_zero() {
            residues.push(format!("{}: {}", label.name, show_generic(module, &total)));
        }
    }

    let mut window_checked = 0;
    let mut window_failures = Vec::new();
    let exc = module.exceptional_offsets();
    if !exc.is_empty() {
        let lo = exc.iter().map(|o| o[0]).min().unwrap() - window - (m as i64) * h.abs();
        let hi = exc.iter().map(|o| o[0]).max().unwrap() + window + (m as i64) * h.abs();
        for o in lo..=hi {
            for l in 0..module.fiber().len() {
                if !module.exists(&[o], l) {
                    continue;
                }
                let v = module.basis_vector(&[o], l);
                for k in -window..=window {
                    for s in -window..=window {
                        window_checked += 1;
                        let img = differentiator_on(module, m, h, k, s, &v);
                        if !img.is_zero() {
                            window_failures.push(format!("k={k} s={s} on {}[{o}]: {}", module.fiber()[l].name, img.display_with(module)));
                        }
                    }
                }
            }
        }
    }
    let annihilates = residues.is_empty() && window_failures.is_empty();
    let witness = if annihilates { None } else { find_witness(module, m, h) };
    Ok(AnnihilationCertificate { m, h, generic_residues: residues, window_checked, window_failures, witness, annihilates })
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    /// `(offset, dimension of the weight space β + offset)`.
    pub rows: Vec<(Vec<i64>, usize)>,
    pub max_dim: usize,
    pub uniformly_bounded: bool,
}

/// Weight-space dimensions on the box `|o|∞ ≤ radius`.
pub fn weight_report<F: Field>(module: &PolyWeightModule<F>, radius: i64) -> WeightReport {
    let rows: Vec<(Vec<i64>, usize)> = box_points(&vec![0; module.rank()], radius)
        .into_iter()
        .map(|o| {
            let d = (0..module.fiber().len()).filter(|&l| module.exists(&o, l)).count();
            (o, d)
        })
        .collect();
    let max_dim = rows.iter().map(|r| r.1).max().unwrap_or(0);
    // A finite fiber bounds every weight space by its size.
    WeightReport { rows, max_dim, uniformly_bounded: max_dim <= module.fiber().len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{feigin_fuks_length2, punctured_functions, tensor_density, virasoro_adjoint, Param};
    use crate::scalar::Ring;

    #[test]
    fn presets_satisfy_axioms() {
        let r = check_module_axioms(&virasoro_adjoint(), 4);
        assert!(r.pass, "{r:?}");
        assert!(r.window_checked > 0);
        assert!(check_module_axioms(&punctured_functions(), 4).pass);
        let ff = check_module_axioms(&feigin_fuks_length2(), 4);
        assert!(ff.pass && ff.window_checked == 0, "{ff:?}");
    }

    #[test]
    fn broken_coefficient_fails() {
        let v = virasoro_adjoint();
        let mut terms = v.terms().to_vec();
        // m^3 + c m is still a cocycle; m^2 is not.
        terms[1].coeff = terms[1].coeff.clone() + v.layout().m::<Rational>(0).pow(2);
        let bad = PolyWeightModule::new(v.layout().clone(), v.beta().to_vec(), v.fiber().to_vec(), terms, vec![]).unwrap();
        assert!(!check_module_axioms(&bad, 4).pass);
    }

    #[test]
    fn tensor_density_is_aw() {
        let t = tensor_density::<Rational>(Param::sym("a"), Param::sym("b"));
        assert!(check_aw_compat(&t).unwrap().is_empty());
        assert!(!check_aw_compat(&feigin_fuks_length2()).unwrap().is_empty());
    }

    #[test]
    fn omega_three_kills_densities() {
        let t = tensor_density::<Rational>(Param::sym("a"), Param::sym("b"));
        assert!(annihilates(&t, 3, 1, 4).unwrap().annihilates);
        let c = annihilates(&t, 2, 1, 4).unwrap();
        assert!(!c.annihilates);
        assert!(c.witness.is_some());
    }

    #[test]
    fn feigin_fuks_orders() {
        let ff = feigin_fuks_length2();
        assert!(annihilates(&ff, 9, 1, 4).unwrap().annihilates);
        assert!(annihilates(&ff, 12, 1, 4).unwrap().annihilates);
        let c = annihilates(&ff, 8, 1, 4).unwrap();
        assert!(!c.annihilates);
        let w = c.witness.unwrap();
        let img = differentiator_on(&ff, 8, 1, w.k, w.s, &ff.vector(&[w.p], &w.label));
        assert!(!img.is_zero());
    }

    #[test]
    fn weight_tables() {
        let p = weight_report(&punctured_functions(), 2);
        assert_eq!(p.rows.iter().find(|r| r.0 == [0]).unwrap().1, 0);
        let v = weight_report(&virasoro_adjoint(), 2);
        assert_eq!(v.rows.iter().find(|r| r.0 == [0]).unwrap().1, 2);
        assert_eq!(v.rows.iter().find(|r| r.0 == [1]).unwrap().1, 1);
    }

    #[test]
    fn specialize_fixes_params() {
        let t = tensor_density::<Rational>(Param::sym("a"), Param::sym("b"));
        let mut vals = BTreeMap::new();
        vals.insert("a".to_string(), Rational::from_i64(2));
        let t2 = t.specialize(&vals).unwrap();
        assert_eq!(t2.layout().params(), ["b".to_string()]);
        let direct = tensor_density::<Rational>(Param::Value(Rational::from_i64(2)), Param::sym("b"));
        assert_eq!(t2, direct);
    }
}
