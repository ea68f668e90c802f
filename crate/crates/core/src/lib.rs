//! Presentations of mod-l complex cobordism rings of classifying spaces of
//! Chevalley groups `G(F_q)` and of the mod-l Chow ring of `BGL(n, F_q)`,
//! together with brute-force verifiers for the identities they rest on.
//!
//! The engines in [`presentations`] are closed formulas driven by the
//! Lie-theoretic data in [`rootdata`] and the arithmetic of `q` modulo `l`
//! in [`arith`]. The verifiers in [`oracles`] recompute the same answers by
//! exact linear algebra over `F_l` without using those formulas, and
//! [`sweep`] runs them over parameter ranges.

pub mod arith;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod par;
pub mod poly;
pub mod presentations;
pub mod rootdata;
pub mod sweep;

pub use arith::{
    galois_params, galois_params_for_field, gl_params, multiplicative_order, GLParams, GaloisParams,
};
pub use error::{Error, Hypothesis, Result};
pub use par::Execution;
pub use poly::{ModPolynomial, PolyRing, TruncatedSeries};
pub use presentations::{GradedPresentation, Grading, Theory};
pub use rootdata::{Family, RootDatum};
