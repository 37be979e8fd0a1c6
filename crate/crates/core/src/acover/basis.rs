use serde::Serialize;

use super::qpv::{psi_evaluate, require_concrete_rank1, CoverLayout, QuasiPolyVector};
use super::AcoverError;
use crate::linalg::{rref, Echelon};
use crate::modules::PolyWeightModule;
use crate::scalar::Field;

pub const CEILING_ENV: &str = "WITTFORGE_DEGREE_CEILING";

#[derive(Clone, Debug, Default)]
pub struct CoverOptions {
    /// First generic `j` sample; defaults to one past every exceptional offset.
    pub first_sample: Option<i64>,
    /// Largest degree bound tried; defaults to `$WITTFORGE_DEGREE_CEILING` or 4× the initial bound.
    pub ceiling: Option<u32>,
}

/// A basis of the weight-`w` space of the cover, in reduced echelon form.
#[derive(Clone, Debug)]
pub struct CoverBasis<F: Field> {
    pub weight: i64,
    pub degree: u32,
    pub layout: CoverLayout,
    pub samples: Vec<i64>,
    pub basis: Vec<QuasiPolyVector<F>>,
    echelon: Echelon<F>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisSummary {
    pub weight: i64,
    pub degree: u32,
    pub rank: usize,
    pub samples: Vec<i64>,
}

impl<F: Field> CoverBasis<F> {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `φ` in the basis, or `None` if `φ` lies outside the span.
    pub fn coordinates(&self, phi: &QuasiPolyVector<F>) -> Option<Vec<F>> {
        if phi.weight() != self.weight {
            return None;
        }
        let c = phi.coords(&self.layout, self.degree).ok()?;
        self.echelon.coordinates(&c)
    }

    pub fn contains(&self, phi: &QuasiPolyVector<F>) -> bool {
        self.coordinates(phi).is_some()
    }

    pub fn summary(&self) -> BasisSummary {
        BasisSummary { weight: self.weight, degree: self.degree, rank: self.rank(), samples: self.samples.clone() }
    }
}

pub(crate) fn ceiling_for(initial: u32, opt: Option<u32>) -> u32 {
    opt.or_else(|| std::env::var(CEILING_ENV).ok().and_then(|v| v.parse().ok())).unwrap_or(4 * initial.max(1))
}

/// Every `ψ(e_{w-j}, u_{j,t})` for the given `j`.
fn generators<F: Field>(module: &PolyWeightModule<F>, w: i64, js: &[i64]) -> Result<Vec<QuasiPolyVector<F>>, AcoverError> {
    let mut out = Vec::new();
    for &j in js {
        for t in 0..module.fiber().len() {
            let psi = psi_evaluate(module, w - j, j, t)?;
            if !psi.is_zero() {
                out.push(psi);
            }
        }
    }
    Ok(out)
}

/// Basis of `span{ψ(e_{w-j}, u_{j,t})}`. For `j` outside the exceptional set
/// every coordinate of `ψ` is a polynomial in `j` of degree at most the
/// action degree `D`, so `D + 1` consecutive samples span the generic part;
/// the exceptional `j` are adjoined, and one further sample certifies
/// stability. The bound grows on failure up to the ceiling.
pub fn cover_basis_with<F: Field>(
    module: &PolyWeightModule<F>,
    w: i64,
    opts: &CoverOptions,
) -> Result<CoverBasis<F>, AcoverError> {
    require_concrete_rank1(module)?;
    let layout = CoverLayout::of(module);
    let exc = layout.exceptional.clone();
    let first = opts.first_sample.unwrap_or_else(|| exc.iter().copied().chain([0]).max().unwrap() + 1);
    let initial = module.max_degree();
    let ceiling = ceiling_for(initial, opts.ceiling);
    let mut degree = initial;
    loop {
        if degree > ceiling {
            return Err(AcoverError::Inconclusive { ceiling });
        }
        let mut samples: Vec<i64> = (first..=first + degree as i64).filter(|j| !exc.contains(j)).collect();
        let mut extra = first + degree as i64 + 1;
        while samples.len() < degree as usize + 1 || exc.contains(&extra) {
            if !exc.contains(&extra) {
                samples.push(extra);
            }
            extra += 1;
        }
        let mut js = samples.clone();
        js.extend(exc.iter().copied());
        let gens = generators(module, w, &js)?;
        let rows = match gens.iter().map(|g| g.coords(&layout, degree)).collect::<Result<Vec<_>, _>>() {
            Ok(r) => r,
            Err(AcoverError::DegreeExceeded(_)) => {
                degree += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let cols = layout.columns(degree);
        let full = rref(&rows, cols);
        let probe = generators(module, w, &[extra])?;
        let stable = probe.iter().all(|g| g.coords(&layout, degree).map(|c| full.contains(&c)).unwrap_or(false));
        if !stable {
            degree += 1;
            continue;
        }
        let basis = full.rows.iter().map(|r| QuasiPolyVector::from_coords(&layout, w, degree, r)).collect();
        let echelon = rref(&full.rows, cols);
        return Ok(CoverBasis { weight: w, degree, layout, samples, basis, echelon });
    }
}

pub fn cover_basis<F: Field>(module: &PolyWeightModule<F>, w: i64) -> Result<CoverBasis<F>, AcoverError> {
    cover_basis_with(module, w, &CoverOptions::default())
}

/// Do two bases span the same space?
pub fn same_span<F: Field>(a: &CoverBasis<F>, b: &CoverBasis<F>) -> bool {
    a.rank() == b.rank() && a.basis.iter().all(|v| b.contains(v))
}
