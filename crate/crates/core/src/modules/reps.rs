use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ModuleError;
use crate::scalar::{Field, Rational};

pub type Matrix<F> = Vec<Vec<F>>;

fn zeros<F: Field>(d: usize) -> Matrix<F> {
    vec![vec![F::zero(); d]; d]
}

fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    crate::linalg::matmul(a, b)
}

fn mat_sub<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.clone() - q).collect()).collect()
}

fn mat_axpy<F: Field>(acc: &mut Matrix<F>, c: &F, b: &Matrix<F>) {
    for (x, y) in acc.iter_mut().zip(b) {
        for (p, q) in x.iter_mut().zip(y) {
            if !q.is_zero() {
                *p = p.clone() + c.clone() * q;
            }
        }
    }
}

fn commutator<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

fn is_zero_matrix<F: Field>(a: &Matrix<F>) -> bool {
    a.iter().all(|r| r.iter().all(F::is_zero))
}

/// A finite-dimensional `gl_n`-module given by the matrices of `E_{pa}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlnRep<F> {
    n: usize,
    dim: usize,
    /// `mats[p][a]` is the matrix of `E_{pa}` (0-based).
    mats: Vec<Vec<Matrix<F>>>,
    labels: Vec<String>,
}

impl<F: Field> GlnRep<F> {
    /// Validates `[E_pq, E_rs] = δ_qr E_ps - δ_sp E_rq`.
    pub fn new(n: usize, dim: usize, mats: Vec<Vec<Matrix<F>>>, labels: Vec<String>) -> Result<Self, ModuleError> {
        if mats.len() != n || mats.iter().any(|r| r.len() != n) {
            return Err(ModuleError::Invalid("need n x n matrices E_pa".into()));
        }
        if labels.len() != dim {
            return Err(ModuleError::Invalid("one label per basis vector".into()));
        }
        for m in mats.iter().flatten() {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(ModuleError::Invalid(format!("matrices must be {dim} x {dim}")));
            }
        }
        let rep = GlnRep { n, dim, mats, labels };
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let lhs = commutator(&rep.mats[p][q], &rep.mats[r][s]);
                        let mut rhs = zeros(dim);
                        if q == r {
                            mat_axpy(&mut rhs, &F::one(), &rep.mats[p][s]);
                        }
                        if s == p {
                            mat_axpy(&mut rhs, &-F::one(), &rep.mats[r][q]);
                        }
                        if !is_zero_matrix(&mat_sub(&lhs, &rhs)) {
                            return Err(ModuleError::Relation(format!(
                                "[E{}{}, E{}{}] breaks the gl_n relation",
                                p + 1,
                                q + 1,
                                r + 1,
                                s + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(rep)
    }

    pub fn trivial(n: usize) -> Self {
        GlnRep { n, dim: 1, mats: vec![vec![zeros(1); n]; n], labels: vec!["1".into()] }
    }

    /// `V = C^n` with `E_pa e_b = δ_ab e_p`.
    pub fn natural(n: usize) -> Self {
        let mut mats = vec![vec![zeros(n); n]; n];
        for (p, row) in mats.iter_mut().enumerate() {
            for (a, m) in row.iter_mut().enumerate() {
                m[p][a] = F::one();
            }
        }
        GlnRep { n, dim: n, mats, labels: (1..=n).map(|i| format!("e{i}")).collect() }
    }

    /// `Λ^k V` on the lexicographic wedge basis, with `E_pa` acting as a derivation.
    pub fn wedge(n: usize, k: usize) -> Self {
        let basis = super::derham::wedge_basis(n, k);
        let index: BTreeMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let dim = basis.len();
        let mut out = vec![vec![zeros::<F>(dim); n]; n];
        for p in 0..n {
            for a in 0..n {
                for (col, b) in basis.iter().enumerate() {
                    for i in 0..b.len() {
                        if b[i] != a {
                            continue;
                        }
                        let mut nb = b.clone();
                        nb[i] = p;
                        if let Some((sign, sorted)) = sort_with_sign(&nb) {
                            let row = index[&sorted];
                            out[p][a][row][col] = out[p][a][row][col].clone() + F::from_i64(sign);
                        }
                    }
                }
            }
        }
        let labels = basis
            .iter()
            .map(|b| if b.is_empty() { "1".to_string() } else { b.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>().join("^") })
            .collect();
        GlnRep { n, dim, mats: out, labels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Matrix of `E_{pa}` (0-based indices).
    pub fn e(&self, p: usize, a: usize) -> &Matrix<F> {
        &self.mats[p][a]
    }
}

/// Sorts distinct indices, returning the permutation sign; `None` on repeats.
pub(crate) fn sort_with_sign(v: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut w = v.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((sign, w))
}

/// A finite-dimensional representation of the positive jet algebra,
/// given by `ρ(t^k ∂_j)` for `1 <= |k| <= cutoff`; zero beyond the cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct JetRep<F> {
    n: usize,
    dim: usize,
    cutoff: u32,
    mats: BTreeMap<(Vec<u32>, usize), Matrix<F>>,
}

fn multi_indices(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in multi_indices(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl<F: Field> JetRep<F> {
    /// Validates `[t^k ∂_i, t^l ∂_j] = l_i t^{k+l-e_i} ∂_j - k_j t^{k+l-e_j} ∂_i`.
    pub fn new(n: usize, dim: usize, cutoff: u32, mats: BTreeMap<(Vec<u32>, usize), Matrix<F>>) -> Result<Self, ModuleError> {
        for ((k, j), m) in &mats {
            let deg: u32 = k.iter().sum();
            if k.len() != n || *j >= n || deg == 0 || deg > cutoff {
                return Err(ModuleError::Invalid(format!("bad jet index k={k:?}, j={}", j + 1)));
            }
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(ModuleError::Invalid(format!("matrices must be {dim} x {dim}")));
            }
        }
        let rep = JetRep { n, dim, cutoff, mats };
        let all: Vec<Vec<u32>> = (1..=cutoff).flat_map(|d| multi_indices(n, d)).collect();
        for k in &all {
            for l in &all {
                for i in 0..n {
                    for j in 0..n {
                        let lhs = commutator(&rep.rho(k, i), &rep.rho(l, j));
                        let mut rhs = zeros(dim);
                        let kl: Vec<u32> = k.iter().zip(l).map(|(a, b)| a + b).collect();
                        if l[i] > 0 {
                            let mut e = kl.clone();
                            e[i] -= 1;
                            mat_axpy(&mut rhs, &F::from_i64(l[i] as i64), &rep.rho(&e, j));
                        }
                        if k[j] > 0 {
                            let mut e = kl.clone();
                            e[j] -= 1;
                            mat_axpy(&mut rhs, &F::from_i64(-(k[j] as i64)), &rep.rho(&e, i));
                        }
                        if !is_zero_matrix(&mat_sub(&lhs, &rhs)) {
                            return Err(ModuleError::Relation(format!(
                                "[t^{k:?} d{}, t^{l:?} d{}] breaks the jet relation",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(rep)
    }

    /// The jet representation whose degree-zero block is `U` and higher blocks vanish.
    pub fn from_gln(u: &GlnRep<F>) -> Result<Self, ModuleError> {
        let n = u.n();
        let mut mats = BTreeMap::new();
        for p in 0..n {
            for a in 0..n {
                let mut k = vec![0u32; n];
                k[p] = 1;
                mats.insert((k, a), u.e(p, a).clone());
            }
        }
        JetRep::new(n, u.dim(), 1, mats)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// `ρ(t^k ∂_j)`, zero when absent or beyond the cutoff.
    pub fn rho(&self, k: &[u32], j: usize) -> Matrix<F> {
        self.mats.get(&(k.to_vec(), j)).cloned().unwrap_or_else(|| zeros(self.dim))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Vec<u32>, usize), &Matrix<F>)> {
        self.mats.iter()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlnEntry {
    p: usize,
    a: usize,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlnDoc {
    kind: String,
    n: usize,
    dim: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    matrices: Vec<GlnEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JetEntry {
    k: Vec<u32>,
    j: usize,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JetDoc {
    kind: String,
    n: usize,
    dim: usize,
    cutoff: u32,
    matrices: Vec<JetEntry>,
}

fn parse_matrix(m: &[Vec<String>]) -> Result<Matrix<Rational>, ModuleError> {
    m.iter()
        .map(|r| r.iter().map(|x| x.parse::<Rational>().map_err(|e| ModuleError::Parse(e.to_string()))).collect())
        .collect()
}

fn show_matrix(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// A representation file: either `gl_n` data or jet data.
pub enum RepFile {
    Gln(GlnRep<Rational>),
    Jet(JetRep<Rational>),
}

impl RepFile {
    pub fn from_json(text: &str) -> Result<Self, ModuleError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| ModuleError::Parse(e.to_string()))?;
        match v.get("kind").and_then(|k| k.as_str()) {
            Some("gln") => {
                let d: GlnDoc = serde_json::from_value(v).map_err(|e| ModuleError::Parse(e.to_string()))?;
                let mut mats = vec![vec![zeros::<Rational>(d.dim); d.n]; d.n];
                for e in &d.matrices {
                    if e.p == 0 || e.a == 0 || e.p > d.n || e.a > d.n {
                        return Err(ModuleError::Invalid(format!("E{}{} out of range", e.p, e.a)));
                    }
                    mats[e.p - 1][e.a - 1] = parse_matrix(&e.matrix)?;
                }
                let labels = d.labels.unwrap_or_else(|| (1..=d.dim).map(|i| format!("u{i}")).collect());
                Ok(RepFile::Gln(GlnRep::new(d.n, d.dim, mats, labels)?))
            }
            Some("jet") => {
                let d: JetDoc = serde_json::from_value(v).map_err(|e| ModuleError::Parse(e.to_string()))?;
                let mut mats = BTreeMap::new();
                for e in &d.matrices {
                    if e.j == 0 {
                        return Err(ModuleError::Invalid("directions are 1-based".into()));
                    }
                    mats.insert((e.k.clone(), e.j - 1), parse_matrix(&e.matrix)?);
                }
                Ok(RepFile::Jet(JetRep::new(d.n, d.dim, d.cutoff, mats)?))
            }
            other => Err(ModuleError::Parse(format!("unknown representation kind {other:?}"))),
        }
    }
}

impl GlnRep<Rational> {
    pub fn to_json(&self) -> String {
        let mut matrices = Vec::new();
        for p in 0..self.n {
            for a in 0..self.n {
                if !is_zero_matrix(&self.mats[p][a]) {
                    matrices.push(GlnEntry { p: p + 1, a: a + 1, matrix: show_matrix(&self.mats[p][a]) });
                }
            }
        }
        let doc = GlnDoc { kind: "gln".into(), n: self.n, dim: self.dim, labels: Some(self.labels.clone()), matrices };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

impl JetRep<Rational> {
    pub fn to_json(&self) -> String {
        let matrices = self
            .mats
            .iter()
            .map(|((k, j), m)| JetEntry { k: k.clone(), j: j + 1, matrix: show_matrix(m) })
            .collect();
        let doc = JetDoc { kind: "jet".into(), n: self.n, dim: self.dim, cutoff: self.cutoff, matrices };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}
