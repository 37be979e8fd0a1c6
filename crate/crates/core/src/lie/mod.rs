//! Lie algebras of vector fields on tori.
//!
//! [`Rank1Algebra`] covers both `W_1` and the solenoidal algebras `W_μ`;
//! [`WnAlgebra`] is the full algebra of vector fields on the `n`-torus.

mod lattice;
mod rank1;
mod text;
mod wn;

pub use lattice::{IndexLattice, Point};
pub use rank1::{jacobi_check, JacobiReport, Rank1Algebra, Rank1Element};
pub use text::{parse_rank1, parse_wn};
pub use wn::{solenoidal_embed, wn_jacobi_check, LatticeAutomorphism, WnAlgebra, WnElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("matrix is not invertible over the integers (det = {0})")]
    NotUnimodular(i64),
    #[error("operation needs a concrete lattice")]
    SymbolicLattice,
    #[error("cannot parse element: {0}")]
    Parse(String),
}
