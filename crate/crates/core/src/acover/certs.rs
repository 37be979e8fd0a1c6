//! Certificates for a cover: cuspidality, the projection `π`, the dual map
//! `π*`, and cross-checks of the induced action.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::basis::{cover_basis_with, same_span, CoverOptions};
use super::induced::CoverModule;
use super::qpv::{e_action, pi_map, psi_evaluate, require_concrete_rank1, QuasiPolyVector};
use super::AcoverError;
use crate::linalg;
use crate::modules::{graded_dual, ModuleVector, PolyWeightModule};
use crate::scalar::Field;

#[derive(Debug, Clone, Serialize)]
pub struct CuspidalityCertificate {
    pub window: (i64, i64),
    pub ranks: Vec<(i64, usize)>,
    pub uniform: bool,
    /// `t^1` maps each weight space isomorphically onto the next.
    pub shift_invertible: bool,
    /// The transported frame spans each computed weight space.
    pub frame_spans: bool,
    pub offending: Option<i64>,
    pub pass: bool,
}

pub fn cuspidality_certificate<F: Field>(
    cover: &CoverModule<F>,
    lo: i64,
    hi: i64,
    opts: &CoverOptions,
) -> Result<CuspidalityCertificate, AcoverError> {
    let module = &cover.source;
    let bases = (lo..=hi + 1).map(|w| cover_basis_with(module, w, opts)).collect::<Result<Vec<_>, _>>()?;
    let ranks: Vec<(i64, usize)> = bases[..bases.len() - 1].iter().map(|b| (b.weight, b.rank())).collect();
    let r0 = cover.rank();
    let mut offending = ranks.iter().find(|(_, r)| *r != r0).map(|(w, _)| *w);
    let uniform = offending.is_none();
    let mut shift_invertible = true;
    let mut frame_spans = true;
    for pair in bases.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let rows: Option<Vec<Vec<F>>> = a.basis.iter().map(|v| b.coordinates(&v.shift(1))).collect();
        let ok = match rows {
            Some(rows) => rows.len() == b.rank() && linalg::rank(&rows, b.rank()) == b.rank(),
            None => false,
        };
        if !ok {
            shift_invertible = false;
            offending.get_or_insert(a.weight);
        }
        let transported = cover.basis_at(a.weight);
        if !(transported.len() == a.rank() && transported.iter().all(|v| a.contains(v))) {
            frame_spans = false;
            offending.get_or_insert(a.weight);
        }
    }
    let pass = uniform && shift_invertible && frame_spans;
    Ok(CuspidalityCertificate { window: (lo, hi), ranks, uniform, shift_invertible, frame_spans, offending, pass })
}

/// `span{ψ}` computed from two disjoint families of generic samples agree.
pub fn span_stability<F: Field>(module: &PolyWeightModule<F>, w: i64, far: i64) -> Result<bool, AcoverError> {
    let a = cover_basis_with(module, w, &CoverOptions::default())?;
    let b = cover_basis_with(module, w, &CoverOptions { first_sample: Some(far), ceiling: None })?;
    Ok(same_span(&a, &b))
}

#[derive(Debug, Clone, Serialize)]
pub struct ActionCheck {
    pub checked: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

fn qpv_eq<F: Field>(a: &QuasiPolyVector<F>, b: &QuasiPolyVector<F>) -> bool {
    let mut d = a.clone();
    d.add_scaled(b, &-F::one());
    d.is_zero()
}

/// Compares the emitted action with the coinduced action
/// `(e_p φ)(t^m) = e_p φ(t^m) - m φ(t^{m+p})` on `|w|, |p| ≤ radius`.
pub fn check_induced_action<F: Field>(cover: &CoverModule<F>, radius: i64) -> Result<ActionCheck, AcoverError> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for w in -radius..=radius {
        let here = cover.basis_at(w);
        for p in -radius..=radius {
            let there = cover.basis_at(w + p);
            for (i, f) in here.iter().enumerate() {
                let lhs = e_action(&cover.source, f, p)?;
                let mut rhs = QuasiPolyVector::zero(w + p, f.dim());
                for (l, g) in there.iter().enumerate() {
                    rhs.add_scaled(g, &cover.action.coefficient(i, l, p, w));
                }
                checked += 1;
                if !qpv_eq(&lhs, &rhs) {
                    failures.push(format!("e_{p} {}_{w}", cover.action.names[i]));
                }
            }
        }
    }
    Ok(ActionCheck { checked, pass: failures.is_empty(), failures })
}

/// `e_p ψ(e_k, u) = ψ([e_p, e_k], u) + ψ(e_k, e_p u)` and `t^p ψ(e_k, u) = ψ(e_{k+p}, u)`.
pub fn check_generator_laws<F: Field>(module: &PolyWeightModule<F>, radius: i64) -> Result<ActionCheck, AcoverError> {
    require_concrete_rank1(module)?;
    let mut checked = 0;
    let mut failures = Vec::new();
    let dim = module.fiber().len();
    for j in -radius..=radius {
        for t in 0..dim {
            if !module.exists(&[j], t) {
                continue;
            }
            for k in -radius..=radius {
                let psi = psi_evaluate(module, k, j, t)?;
                for p in -radius..=radius {
                    let lhs = e_action(module, &psi, p)?;
                    let mut rhs = psi_evaluate(module, k + p, j, t)?;
                    rhs = scaled(&rhs, &F::from_i64(k - p));
                    let pu = module.act_basis(0, &[p], &module.vector(&[j], &module.fiber()[t].name));
                    for ((o, t2), c) in pu.terms() {
                        let c = c.as_constant().expect("concrete");
                        rhs.add_scaled(&psi_evaluate(module, k, o[0], *t2)?, &c);
                    }
                    checked += 1;
                    if !qpv_eq(&lhs, &rhs) {
                        failures.push(format!("e_{p} psi(e_{k}, {}_{j})", module.fiber()[t].name));
                    }
                    checked += 1;
                    if !qpv_eq(&psi.shift(p), &psi_evaluate(module, k + p, j, t)?) {
                        failures.push(format!("t^{p} psi(e_{k}, {}_{j})", module.fiber()[t].name));
                    }
                }
            }
        }
    }
    Ok(ActionCheck { checked, pass: failures.is_empty(), failures })
}

fn scaled<F: Field>(v: &QuasiPolyVector<F>, c: &F) -> QuasiPolyVector<F> {
    let mut out = QuasiPolyVector::zero(v.weight(), v.dim());
    out.add_scaled(v, c);
    out
}

fn to_row<F: Field>(v: &ModuleVector<F>, o: i64, dim: usize) -> Vec<F> {
    (0..dim).map(|t| v.get(&[o], t).map_or_else(F::zero, |c| c.as_constant().expect("concrete"))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionReport {
    pub weight: i64,
    pub pi_rank: usize,
    pub action_rank: usize,
    pub homomorphism_checked: usize,
    pub homomorphism_failures: Vec<String>,
    pub pass: bool,
}

/// `π(cover_w) = (W·M)_w` by rank comparison, and `π(e_p φ) = e_p π(φ)`.
pub fn projection_report<F: Field>(cover: &CoverModule<F>, w: i64, radius: i64) -> Result<ProjectionReport, AcoverError> {
    let module = &cover.source;
    let dim = module.fiber().len();
    let basis = cover.basis_at(w);
    let pis: Vec<Vec<F>> = basis.iter().map(|f| to_row(&pi_map(module, f), w, dim)).collect();
    let pi_rank = linalg::rank(&pis, dim);
    let mut js: Vec<i64> = (w - radius - 8..=w + radius + 8).collect();
    js.extend(module.exceptional_offsets().into_iter().map(|o| o[0]));
    let mut images = Vec::new();
    for j in js {
        for t in 0..dim {
            if module.exists(&[j], t) {
                let v = module.act_basis(0, &[w - j], &module.vector(&[j], &module.fiber()[t].name));
                images.push(to_row(&v, w, dim));
            }
        }
    }
    let action_rank = linalg::rank(&images, dim);
    let mut checked = 0;
    let mut failures = Vec::new();
    for (i, f) in basis.iter().enumerate() {
        for p in -radius..=radius {
            let lhs = pi_map(module, &e_action(module, f, p)?);
            let rhs = module.act_basis(0, &[p], &pi_map(module, f));
            checked += 1;
            if !lhs.sub(&rhs).is_zero() {
                failures.push(format!("pi(e_{p} {}_{w})", cover.action.names[i]));
            }
        }
    }
    let pass = pi_rank == action_rank && failures.is_empty();
    Ok(ProjectionReport { weight: w, pi_rank, action_rank, homomorphism_checked: checked, homomorphism_failures: failures, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct PiStarReport {
    pub samples: usize,
    pub pairing_failures: Vec<String>,
    pub homomorphism_failures: Vec<String>,
    /// Basis vectors `u` (offset, label) in the window with `π*(u) = 0`.
    pub kernel: Vec<(i64, String)>,
    /// The same vectors found by testing `e_k u = 0`.
    pub annihilated: Vec<(i64, String)>,
    pub pass: bool,
}

fn pair<F: Field>(xi: &ModuleVector<F>, u: &ModuleVector<F>) -> F {
    // The dual basis vector at offset -o pairs with the basis vector at o.
    let mut acc = F::zero();
    for ((o, t), c) in xi.terms() {
        if let Some(d) = u.get(&[-o[0]], *t) {
            acc = acc + c.as_constant().unwrap() * &d.as_constant().unwrap();
        }
    }
    acc
}

/// `π*: M → (cover of M*)*`, `π*(u)(φ) = -φ(1)(u)`: checks the pairing
/// `ξ(x u) = -(x ξ)(u)`, the homomorphism identity `(yφ)(1)(u) = -φ(1)(y u)`
/// on random samples, and that the kernel is `{u : e_k u = 0 ∀k}`.
pub fn pi_star_check<F: Field>(module: &PolyWeightModule<F>, samples: usize, seed: u64, radius: i64) -> Result<PiStarReport, AcoverError> {
    require_concrete_rank1(module)?;
    let dual = graded_dual(module)?;
    let dim = module.fiber().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairing_failures = Vec::new();
    let mut homomorphism_failures = Vec::new();
    let mut done = 0;
    let mut tries = 0;
    while done < samples && tries < samples * 50 {
        tries += 1;
        let (o, t) = (rng.gen_range(-radius..=radius), rng.gen_range(0..dim));
        let (d, s) = (rng.gen_range(-radius..=radius), rng.gen_range(0..dim));
        let (k, p) = (rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius));
        if !module.exists(&[o], t) || !dual.exists(&[d], s) {
            continue;
        }
        done += 1;
        let u = module.vector(&[o], &module.fiber()[t].name);
        let xi = dual.vector(&[d], &dual.fiber()[s].name);
        let lhs = pair(&xi, &module.act_basis(0, &[k], &u));
        let rhs = -pair(&dual.act_basis(0, &[k], &xi), &u);
        if lhs != rhs {
            pairing_failures.push(format!("k={k} u={o},{t} xi={d},{s}"));
        }
        let phi = psi_evaluate(&dual, k, d, s)?;
        let yphi = e_action(&dual, &phi, p)?;
        let lhs = pair(&pi_map(&dual, &yphi), &u);
        let rhs = -pair(&pi_map(&dual, &phi), &module.act_basis(0, &[p], &u));
        if lhs != rhs {
            homomorphism_failures.push(format!("p={p} k={k} u={o},{t} xi={d},{s}"));
        }
    }
    let mut kernel = Vec::new();
    let mut annihilated = Vec::new();
    for o in -radius..=radius {
        for t in 0..dim {
            if !module.exists(&[o], t) {
                continue;
            }
            let name = module.fiber()[t].name.clone();
            let u = module.vector(&[o], &name);
            let ks = -2 * radius..=2 * radius;
            if ks.clone().all(|k| module.act_basis(0, &[k], &u).is_zero()) {
                annihilated.push((o, name.clone()));
            }
            // π*(u) on the generators ψ(e_k, ξ) spanning the dual cover.
            let mut vanishes = true;
            'outer: for k in ks {
                for d in -3 * radius..=3 * radius {
                    for s in 0..dim {
                        if !dual.exists(&[d], s) {
                            continue;
                        }
                        let phi = psi_evaluate(&dual, k, d, s)?;
                        if !pair(&pi_map(&dual, &phi), &u).is_zero() {
                            vanishes = false;
                            break 'outer;
                        }
                    }
                }
            }
            if vanishes {
                kernel.push((o, name));
            }
        }
    }
    let pass = pairing_failures.is_empty() && homomorphism_failures.is_empty() && kernel == annihilated;
    Ok(PiStarReport { samples: done, pairing_failures, homomorphism_failures, kernel, annihilated, pass })
}
