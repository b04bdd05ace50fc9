//! Exact and Monte Carlo simulation of two unentangled multi-prover verifiers
//! for graph constraint satisfaction: the two-prover swap / consistency /
//! uniformity verifier and the κ-prover conditional-uniformity / consistency
//! verifier.
//!
//! Proofs are pure product states over a vertex register of dimension `N` and
//! a color register of dimension `K` ("graph coloring states"). Every test has
//! an exact rejection-probability evaluator and a seeded sampler that executes
//! the measurement logic outcome by outcome.
//!
//! The crate is organized as:
//!
//! - [`csp`]: instances, colorings, satisfaction accounting, generators and
//!   the brute-force oracle.
//! - [`state`]: amplitudes, the DFT, measurement distributions, swap-test and
//!   distance primitives, and the Fourier color-marginal quantities.
//! - [`verifier`]: the four tests and the two protocols.
//! - [`adversary`]: searches for cheating proofs on unsatisfiable instances.
//! - [`bounds`]: soundness constants, lemma checkers, collision statistics and
//!   the scaling experiments.
//! - [`io`]: JSON file formats for instances, colorings and states.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod bounds;
pub mod csp;
mod error;
pub mod io;
pub mod rng;
pub mod state;
pub mod verifier;

pub use csp::{Coloring, CspInstance, DirectedEdge, EdgeMode};
pub use error::{Error, Result};
pub use state::{ColoringState, JointAmplitude, OutcomeDistribution};
pub use verifier::{Protocol, TestKind, TestReport, VerifierConfig};

/// Default cap on brute-force enumeration sizes (colorings, outcome tuples).
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Tolerance used when validating normalization of amplitudes and
/// distributions.
pub const NORM_TOLERANCE: f64 = 1e-9;
