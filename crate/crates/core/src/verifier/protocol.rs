//! The two verifiers as mixtures of their tests.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::exact::ExactCaps;
use super::sampling::{exact_test, tally, PreparedTest};
use super::{Protocol, TestKind, TestReport, VerifierConfig};
use crate::csp::CspInstance;
use crate::state::ColoringState;
use crate::{Error, Result};

impl Protocol {
    /// Tests among which the verifier picks uniformly.
    pub fn tests(self) -> &'static [TestKind] {
        match self {
            Protocol::Bt09 => &[TestKind::Swap, TestKind::Cons, TestKind::Unif],
            Protocol::Cd10 => &[TestKind::CondUnif, TestKind::Cons],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRun {
    pub config: VerifierConfig,
    pub acceptance: f64,
    pub tests: Vec<TestReport>,
}

impl ExactRun {
    pub fn reject_of(&self, test: TestKind) -> Option<f64> {
        self.tests.iter().find(|t| t.test == test).and_then(|t| t.exact_reject)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledRun {
    pub config: VerifierConfig,
    pub overall: TestReport,
    /// Rejection rate of each test among the runs that selected it.
    pub per_test: Vec<TestReport>,
}

fn check_arity(config: &VerifierConfig, inst: &CspInstance, states: &[ColoringState]) -> Result<()> {
    config.validate()?;
    if states.len() != config.kappa {
        return Err(Error::contract(format!(
            "{} expects {} proofs, got {}",
            config.protocol.as_str(),
            config.kappa,
            states.len()
        )));
    }
    for s in &states[1..] {
        states[0].same_shape(s)?;
    }
    super::exact::check_instance(inst, &states[0])
}

/// Exact acceptance probability. Fails with [`Error::TooLarge`] when the
/// κ-prover Cons enumeration is over budget.
pub fn run_verifier_exact(
    config: &VerifierConfig,
    inst: &CspInstance,
    states: &[ColoringState],
    caps: ExactCaps,
) -> Result<ExactRun> {
    check_arity(config, inst, states)?;
    let tests = config.protocol.tests();
    let mut reports = Vec::with_capacity(tests.len());
    let mut reject = 0.0;
    for &t in tests {
        let p = exact_test(t, inst, states, config.edge_mode, config.z, caps)?.ok_or_else(|| Error::TooLarge {
            what: "Cons outcome space".into(),
            size: ((inst.n_vertices() * inst.alphabet_size()) as u128).saturating_pow(states.len() as u32),
            cap: caps.enumeration,
        })?;
        reject += p;
        reports.push(TestReport::exact(t, p));
    }
    let acceptance = (1.0 - reject / tests.len() as f64).clamp(0.0, 1.0);
    Ok(ExactRun {
        config: *config,
        acceptance,
        tests: reports,
    })
}

/// Simulates `n_samples` complete verifier runs. Exact values are attached to
/// the reports whenever they are within `caps`.
pub fn run_verifier_sampled(
    config: &VerifierConfig,
    inst: &CspInstance,
    states: &[ColoringState],
    n_samples: u64,
    seed: u64,
    caps: ExactCaps,
) -> Result<SampledRun> {
    check_arity(config, inst, states)?;
    if n_samples == 0 {
        return Err(Error::contract("n_samples must be at least 1"));
    }
    let tests = config.protocol.tests();
    let prepared = tests
        .iter()
        .map(|&t| PreparedTest::new(t, inst, states, config.edge_mode, config.z))
        .collect::<Result<Vec<_>>>()?;
    let exact = tests
        .iter()
        .map(|&t| exact_test(t, inst, states, config.edge_mode, config.z, caps))
        .collect::<Result<Vec<_>>>()?;

    // tallies packed as [runs_0, rejects_0, runs_1, rejects_1, ...]
    let width = tests.len();
    let counts = std::sync::Mutex::new(vec![0u64; 2 * width]);
    tally(n_samples, seed, |r, count| {
        let mut local = vec![0u64; 2 * width];
        let mut scratch = Vec::with_capacity(states.len());
        for _ in 0..count {
            let t = r.random_range(0..width);
            local[2 * t] += 1;
            if prepared[t].trial(r, &mut scratch) {
                local[2 * t + 1] += 1;
            }
        }
        let mut g = counts.lock().expect("tally lock");
        for (a, b) in g.iter_mut().zip(&local) {
            *a += b;
        }
        0
    });
    let counts = counts.into_inner().expect("tally lock");

    let per_test: Vec<TestReport> = tests
        .iter()
        .enumerate()
        .map(|(i, &t)| TestReport::from_counts(t, counts[2 * i + 1], counts[2 * i], seed, exact[i]))
        .collect();
    let total_rejects: u64 = (0..width).map(|i| counts[2 * i + 1]).sum();
    let overall_exact = if exact.iter().all(Option::is_some) {
        Some(exact.iter().flatten().sum::<f64>() / width as f64)
    } else {
        None
    };
    Ok(SampledRun {
        config: *config,
        overall: TestReport::from_counts(TestKind::Overall, total_rejects, n_samples, seed, overall_exact),
        per_test,
    })
}
