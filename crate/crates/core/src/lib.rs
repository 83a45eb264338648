//! Diagonal subspace arrangements `Δ_K(X) ⊆ X^m` and their complements.
//!
//! The crate computes two things side by side and compares them:
//!
//! * the integral reduced homology and Euler characteristics that the
//!   suspension splitting of `Δ_K(X)` predicts (modules [`predict`] and
//!   [`euler`]), valid whenever `2(dim K + 1) < m`;
//! * the same invariants computed by brute force, by building `Δ_K(X)`,
//!   the polyhedral product `X^K` and smash powers of `X` as finite
//!   simplicial sets ([`sset`]) and running exact Smith normal form on
//!   their normalized chain complexes ([`homology`]).
//!
//! [`verify`] ties both sides together into a [`verify::VerificationReport`].
//!
//! With the default `parallel` feature, independent work (per-facet
//! enumeration, boundary assembly, per-degree Smith normal forms, suite
//! cases) is spread over a rayon pool. Without it every loop runs
//! sequentially and produces identical output.

pub mod catalog;
pub mod complex;
pub mod error;
pub mod euler;
pub mod homology;
pub mod par;
pub mod predict;
pub mod sset;
pub mod verify;

pub use complex::SimplicialComplex;
pub use error::{Error, Result};
pub use homology::{ChainComplex, GradedAbelianGroup};
pub use sset::{SSet, Simplex};
