//! The four graph-coloring-state tests and the two verifiers built from them.
//!
//! Every test has an exact evaluator over product-state proofs
//! ([`exact`]) and a seeded sampler that draws measurement outcomes and applies
//! the test logic verbatim ([`sampling`]).

pub mod exact;
mod protocol;
pub mod sampling;

pub use exact::{
    cond_unif_reject_exact, cond_unif_threshold, cons_reject_exact, cons_reject_two, unif_reject_exact,
    unif_reject_full, zero_color_stats, ConsBreakdown, ExactCaps, ZeroColorStats,
};
pub use protocol::{run_verifier_exact, run_verifier_sampled, ExactRun, SampledRun};
pub use sampling::{sample_test, swap_test_report};

use serde::{Deserialize, Serialize};

use crate::csp::EdgeMode;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// Two provers; one of Swap, Cons, Unif∧Unif chosen uniformly.
    Bt09,
    /// κ provers; one of CondUnif_z, Cons chosen uniformly.
    Cd10,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Bt09 => "bt09",
            Protocol::Cd10 => "cd10",
        }
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bt09" => Ok(Protocol::Bt09),
            "cd10" => Ok(Protocol::Cd10),
            _ => Err(Error::contract(format!("unknown protocol {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestKind {
    Swap,
    Unif,
    CondUnif,
    ColCons,
    EdgeCons,
    Cons,
    /// The whole protocol: random test selection included.
    Overall,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::Swap => "Swap",
            TestKind::Unif => "Unif",
            TestKind::CondUnif => "CondUnif",
            TestKind::ColCons => "ColCons",
            TestKind::EdgeCons => "EdgeCons",
            TestKind::Cons => "Cons",
            TestKind::Overall => "Overall",
        }
    }
}

/// Exact and/or sampled rejection probability of one test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test: TestKind,
    pub exact_reject: Option<f64>,
    pub sampled_reject: Option<f64>,
    pub n_samples: u64,
    pub seed: u64,
    /// Binomial standard error of `sampled_reject`.
    pub std_error: Option<f64>,
    /// When both values are present: whether they agree within six standard
    /// errors (the larger of the sampled and the exact-implied error).
    pub consistent: Option<bool>,
}

impl TestReport {
    pub fn exact(test: TestKind, p: f64) -> Self {
        TestReport {
            test,
            exact_reject: Some(p),
            sampled_reject: None,
            n_samples: 0,
            seed: 0,
            std_error: None,
            consistent: None,
        }
    }

    pub(crate) fn from_counts(test: TestKind, rejects: u64, trials: u64, seed: u64, exact: Option<f64>) -> Self {
        let (sampled, se) = if trials > 0 {
            let p = rejects as f64 / trials as f64;
            (Some(p), Some((p * (1.0 - p) / trials as f64).sqrt()))
        } else {
            (None, None)
        };
        let consistent = match (exact, sampled, se) {
            (Some(e), Some(s), Some(se)) => {
                let se_exact = (e.clamp(0.0, 1.0) * (1.0 - e.clamp(0.0, 1.0)) / trials as f64).sqrt();
                Some((e - s).abs() <= 6.0 * se.max(se_exact) + 1e-12)
            }
            _ => None,
        };
        TestReport {
            test,
            exact_reject: exact,
            sampled_reject: sampled,
            n_samples: trials,
            seed,
            std_error: se,
            consistent,
        }
    }

    /// Standard error implied by the exact probability, when present.
    pub fn exact_std_error(&self) -> Option<f64> {
        self.exact_reject.map(|p| {
            let p = p.clamp(0.0, 1.0);
            (p * (1.0 - p) / self.n_samples.max(1) as f64).sqrt()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifierConfig {
    pub protocol: Protocol,
    pub kappa: usize,
    /// CondUnif threshold as an absolute count: reject iff fewer than `z`
    /// provers measure Fourier color 0.
    pub z: f64,
    pub edge_mode: EdgeMode,
}

impl VerifierConfig {
    pub fn bt09(edge_mode: EdgeMode) -> Self {
        VerifierConfig {
            protocol: Protocol::Bt09,
            kappa: 2,
            z: 0.0,
            edge_mode,
        }
    }

    pub fn cd10(kappa: usize, z: f64, edge_mode: EdgeMode) -> Self {
        VerifierConfig {
            protocol: Protocol::Cd10,
            kappa,
            z,
            edge_mode,
        }
    }

    /// `z = fraction · κ`.
    pub fn z_from_fraction(kappa: usize, fraction: f64) -> f64 {
        fraction * kappa as f64
    }

    /// Default CD10 preset, `z = 0.99 κ / K`.
    pub fn cd10_scaled(kappa: usize, k: usize, edge_mode: EdgeMode) -> Self {
        Self::cd10(kappa, 0.99 * kappa as f64 / k as f64, edge_mode)
    }

    /// The threshold as literally written in the verifier, `z = 0.99 κ`.
    pub fn cd10_literal(kappa: usize, edge_mode: EdgeMode) -> Self {
        Self::cd10(kappa, Self::z_from_fraction(kappa, 0.99), edge_mode)
    }

    pub fn validate(&self) -> Result<()> {
        match self.protocol {
            Protocol::Bt09 if self.kappa != 2 => {
                return Err(Error::contract(format!("BT09 needs exactly 2 provers, got {}", self.kappa)))
            }
            Protocol::Cd10 if self.kappa < 2 => {
                return Err(Error::contract(format!("CD10 needs at least 2 provers, got {}", self.kappa)))
            }
            _ => {}
        }
        if !(self.z >= 0.0 && self.z <= self.kappa as f64) {
            return Err(Error::contract(format!("z = {} outside [0, {}]", self.z, self.kappa)));
        }
        Ok(())
    }
}
