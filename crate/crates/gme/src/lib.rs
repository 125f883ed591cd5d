//! A toolkit for constructing and evaluating multipartite-entanglement signals.
//!
//! The crate is organized around one idea: local-unitary invariants of pure
//! multipartite states that form a *compatible family* across coarse-grainings
//! can be combined, via Möbius inversion on the set-partition lattice, into
//! quantities that vanish identically on states without genuine multipartite
//! entanglement.
//!
//! The pipeline has three layers:
//!
//! 1. **Combinatorics** ([`partition`], [`algebra`]): set partitions of a party
//!    set under the refinement order, their Möbius function, and exact rational
//!    vectors in the free module over the lattice. Everything here is exact.
//! 2. **Numerics** ([`state`], [`invariant`]): dense complex tensors for pure
//!    states, coarse-graining, reduced densities, canonical purification, Rényi
//!    entropies, and permutation-tuple replica invariants. Floating point
//!    appears only here, at evaluation time.
//! 3. **Signals** ([`signal`], [`harness`]): builders that turn a seed family of
//!    invariants into signal/pre-signal bases, grouped coefficient expansions,
//!    zero-sum tensor signals, and a verification harness with reproducible
//!    random ensembles and machine-readable reports.
//!
//! The `gme` binary exposes the same functionality on the command line; see the
//! repository README for a tour.

pub mod algebra;
pub mod error;
pub mod exact;
pub mod harness;
pub mod invariant;
pub mod linalg;
pub mod partition;
pub mod rational;
pub mod rng;
pub mod signal;
pub mod state;

pub use error::{Error, Result};
