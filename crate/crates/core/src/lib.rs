//! Exact computations with Lie algebras of vector fields on tori.

pub mod acover;
pub mod cli;
pub mod enveloping;
pub mod lie;
pub mod linalg;
pub mod modules;
pub mod scalar;
