//! A-covers of rank-one weight modules.
//!
//! The cover of `M` is the span of the maps `ψ(x, u): t^m ↦ (t^m x) u` inside
//! `Hom(A, M)`, with `A = C[t, t^{-1}]`. Each `ψ` is quasi-polynomial in the
//! mode `m`, so every weight space of the cover is found by finite linear
//! algebra.

mod basis;
mod certs;
mod induced;
mod qpv;

use crate::modules::ModuleError;

pub use basis::{cover_basis, cover_basis_with, same_span, BasisSummary, CoverBasis, CoverOptions, CEILING_ENV};
pub use certs::{
    check_generator_laws, check_induced_action, cuspidality_certificate, pi_star_check, projection_report, span_stability,
    ActionCheck, CuspidalityCertificate, PiStarReport, ProjectionReport,
};
pub use induced::{build_cover, change_basis, emit, induced_action, psi_symbolic, reference_frame, CoverModule, InducedAction, ReferenceFrame};
pub use qpv::{e_action, pi_map, psi_evaluate, CoverLayout, QuasiPolyVector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AcoverError {
    #[error("unsupported presentation: {0}")]
    Unsupported(String),
    #[error("inconclusive: no stable span up to degree bound {ceiling}")]
    Inconclusive { ceiling: u32 },
    #[error("degree {0} exceeds the current bound")]
    DegreeExceeded(u32),
    #[error("closure failure: {0}")]
    Closure(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{check_aw_compat, check_module_axioms, punctured_functions, tensor_density, virasoro_adjoint, Param};
    use crate::scalar::{Poly, Rational, Ring};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn punctured_cover_fills_the_hole() {
        let m = punctured_functions();
        for w in -7..=7 {
            assert_eq!(cover_basis(&m, w).unwrap().rank(), 1, "w={w}");
        }
        let cover = build_cover(&m, &CoverOptions::default()).unwrap();
        let r = reference_frame("punctured_functions").unwrap();
        let act = change_basis(&m, &cover.frame, &r.basis, &r.names).unwrap();
        for p in -3..=3 {
            for w in -3..=3 {
                assert_eq!(act.coefficient(0, 0, p, w), q(w));
            }
        }
        assert!(pi_map(&m, &r.basis[0]).is_zero());
        let psi = psi_evaluate(&m, 2, 3, 0).unwrap();
        // ψ(e_k, u_s) = s θ_{k+s}
        let mut want = r.basis[0].shift(5);
        want.add_scaled(&r.basis[0].shift(5), &q(2));
        assert_eq!(psi, want);
    }

    #[test]
    fn virasoro_cover_matches_reference() {
        let m = virasoro_adjoint();
        let cover = build_cover(&m, &CoverOptions::default()).unwrap();
        assert_eq!(cover.rank(), 3);
        let r = reference_frame("virasoro_adjoint").unwrap();
        let act = change_basis(&m, &cover.frame, &r.basis, &r.names).unwrap();
        let ring = crate::acover::induced::opw_ring();
        for (i, row) in r.action.iter().enumerate() {
            for (l, text) in row.iter().enumerate() {
                let want = Poly::<Rational>::parse(text, &ring).unwrap();
                assert_eq!(act.coeffs[i][l], want, "{i}->{l}");
            }
        }
        let psi = psi_symbolic(&m, &r.basis, 0).unwrap();
        let jr = crate::scalar::Vars::new(["o", "j"]);
        for (c, text) in psi.iter().zip(&r.psi) {
            assert_eq!(*c, Poly::parse(text, &jr).unwrap());
        }
        assert!(psi_symbolic(&m, &r.basis, 1).is_ok());
    }

    #[test]
    fn emitted_actions_are_modules() {
        for m in [punctured_functions(), virasoro_adjoint(), tensor_density(Param::Value(Rational::new(1, 3)), Param::Value(Rational::new(2, 5)))] {
            let cover = build_cover(&m, &CoverOptions::default()).unwrap();
            let rep = check_module_axioms(&cover.presentation, 4);
            assert!(rep.pass, "{rep:?}");
            assert!(check_aw_compat(&cover.presentation).unwrap().is_empty());
            assert!(check_induced_action(&cover, 3).unwrap().pass);
            assert!(check_generator_laws(&m, 2).unwrap().pass);
        }
    }

    #[test]
    fn certificates() {
        let m = virasoro_adjoint();
        let cover = build_cover(&m, &CoverOptions::default()).unwrap();
        assert!(cuspidality_certificate(&cover, -3, 3, &CoverOptions::default()).unwrap().pass);
        for w in -2..=2 {
            let pr = projection_report(&cover, w, 3).unwrap();
            assert!(pr.pass, "{pr:?}");
        }
        let ps = pi_star_check(&m, 40, 7, 3).unwrap();
        assert!(ps.pass, "{ps:?}");
        assert_eq!(ps.kernel, vec![(0, "z".to_string())]);
        assert!(span_stability(&m, 1, 10).unwrap());
    }
}
