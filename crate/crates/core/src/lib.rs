//! # isotangle
//!
//! Entanglement measures built on the purity of marginal density operators:
//! the I-concurrence, the tangle (convex roof of the squared I-concurrence) and
//! the entanglement of formation.
//!
//! The crate has two halves:
//!
//! - exact evaluators for isotropic two-qudit states in any dimension
//!   ([`iso`]), built from the explicit branch solutions of the constrained
//!   minimisation of the pure-state tangle at fixed singlet fidelity, and
//! - independent numerical oracles ([`roof`]) that re-derive those values by
//!   direct optimisation: constrained local search over Schmidt vectors,
//!   lower convex envelopes of sampled curves, ensemble-parameterised convex
//!   roof upper bounds, and the Wootters two-qubit formula.
//!
//! Supporting modules provide small dense complex linear algebra ([`qlinalg`]),
//! state constructors and canonical forms ([`states`]) and pure-state measures
//! ([`pure_measures`]).

#![forbid(unsafe_code)]

pub mod error;
pub mod iso;
pub mod pure_measures;
pub mod qlinalg;
pub mod roof;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
