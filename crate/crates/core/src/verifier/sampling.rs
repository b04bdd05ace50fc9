//! Seeded Monte Carlo execution of the individual tests.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng as _;
use rayon::prelude::*;

use super::exact::{
    check_instance, cond_unif_reject_exact, edge_clause, cond_unif_threshold, cons_reject_exact, cons_reject_two,
    unif_reject_exact, ExactCaps,
};
use super::{TestKind, TestReport};
use crate::csp::{CspInstance, EdgeMode};
use crate::rng::{self, Rng};
use crate::state::{apply_fourier, distribution, measure_distribution, swap_reject_prob, ColoringState};
use crate::{Error, Result};

/// Outcome sampler for one measured register pair.
#[derive(Debug, Clone)]
pub(crate) struct OutcomeSampler {
    k: usize,
    index: WeightedIndex<f64>,
}

impl OutcomeSampler {
    fn new(n: usize, k: usize, probs: &[f64]) -> Result<Self> {
        debug_assert_eq!(probs.len(), n * k);
        let index = WeightedIndex::new(probs.iter().map(|p| p.max(0.0)))
            .map_err(|e| Error::InvalidState(format!("outcome distribution: {e}")))?;
        Ok(OutcomeSampler { k, index })
    }

    fn computational(s: &ColoringState) -> Result<Self> {
        let d = distribution(s);
        Self::new(s.n(), s.k(), d.probs())
    }

    fn fourier(s: &ColoringState) -> Result<Self> {
        let d = measure_distribution(&apply_fourier(s, true, true));
        Self::new(s.n(), s.k(), d.probs())
    }

    #[inline]
    fn sample(&self, rng: &mut Rng) -> (usize, usize) {
        let idx = self.index.sample(rng);
        (idx / self.k, idx % self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Clause {
    Col,
    Edge,
    Both,
}

/// One test, prepared for repeated trials.
#[derive(Debug, Clone)]
pub(crate) enum PreparedTest {
    Swap { p: f64 },
    Unif { provers: Vec<OutcomeSampler> },
    CondUnif { provers: Vec<OutcomeSampler>, need: usize },
    Cons {
        provers: Vec<OutcomeSampler>,
        inst: CspInstance,
        mode: EdgeMode,
        clause: Clause,
    },
}

impl PreparedTest {
    pub(crate) fn new(
        test: TestKind,
        inst: &CspInstance,
        states: &[ColoringState],
        mode: EdgeMode,
        z: f64,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::contract("no proofs supplied"));
        }
        for s in &states[1..] {
            states[0].same_shape(s)?;
        }
        check_instance(inst, &states[0])?;
        let computational = || states.iter().map(OutcomeSampler::computational).collect::<Result<Vec<_>>>();
        let fourier = || states.iter().map(OutcomeSampler::fourier).collect::<Result<Vec<_>>>();
        let cons = |clause| -> Result<PreparedTest> {
            if states.len() < 2 {
                return Err(Error::contract("Cons needs at least two provers"));
            }
            Ok(PreparedTest::Cons {
                provers: computational()?,
                inst: inst.for_mode(mode).into_owned(),
                mode,
                clause,
            })
        };
        match test {
            TestKind::Swap => {
                if states.len() != 2 {
                    return Err(Error::contract(format!("swap test needs 2 proofs, got {}", states.len())));
                }
                Ok(PreparedTest::Swap {
                    p: swap_reject_prob(&states[0], &states[1])?,
                })
            }
            TestKind::Unif => Ok(PreparedTest::Unif { provers: fourier()? }),
            TestKind::CondUnif => {
                if !(z >= 0.0 && z <= states.len() as f64) {
                    return Err(Error::contract(format!("z = {z} outside [0, {}]", states.len())));
                }
                Ok(PreparedTest::CondUnif {
                    provers: fourier()?,
                    need: cond_unif_threshold(z),
                })
            }
            TestKind::Cons => cons(Clause::Both),
            TestKind::ColCons => cons(Clause::Col),
            TestKind::EdgeCons => cons(Clause::Edge),
            TestKind::Overall => Err(Error::contract("Overall is not a single test")),
        }
    }

    /// Runs the test once; `true` means reject.
    pub(crate) fn trial(&self, rng: &mut Rng, scratch: &mut Vec<(usize, usize)>) -> bool {
        match self {
            PreparedTest::Swap { p } => rng.random::<f64>() < *p,
            PreparedTest::Unif { provers } => {
                let mut reject = false;
                for pr in provers {
                    let (v, j) = pr.sample(rng);
                    reject |= j == 0 && v != 0;
                }
                reject
            }
            PreparedTest::CondUnif { provers, need } => {
                let mut zeros = 0;
                let mut reject = false;
                for pr in provers {
                    let (v, j) = pr.sample(rng);
                    if j == 0 {
                        zeros += 1;
                        reject |= v != 0;
                    }
                }
                reject || zeros < *need
            }
            PreparedTest::Cons {
                provers,
                inst,
                mode,
                clause,
            } => {
                scratch.clear();
                scratch.extend(provers.iter().map(|pr| pr.sample(rng)));
                for b in 1..scratch.len() {
                    let (vb, jb) = scratch[b];
                    for &(va, ja) in &scratch[..b] {
                        let col = va == vb && ja != jb;
                        let fires = match clause {
                            Clause::Col => col,
                            Clause::Edge => edge_clause(inst, *mode, va, ja, vb, jb),
                            Clause::Both => col || edge_clause(inst, *mode, va, ja, vb, jb),
                        };
                        if fires {
                            return true;
                        }
                    }
                }
                false
            }
        }
    }
}

/// Runs `n` trials split over independent streams of `seed` and returns the
/// rejection count. `run` receives each chunk's generator and trial count.
pub(crate) fn tally<F>(n: u64, seed: u64, run: F) -> u64
where
    F: Fn(&mut Rng, u64) -> u64 + Sync,
{
    rng::chunks(n)
        .into_par_iter()
        .map(|(idx, count)| {
            let mut r = rng::stream(seed, idx);
            run(&mut r, count)
        })
        .sum()
}

/// Exact rejection probability of one test when it is within budget.
pub(crate) fn exact_test(
    test: TestKind,
    inst: &CspInstance,
    states: &[ColoringState],
    mode: EdgeMode,
    z: f64,
    caps: ExactCaps,
) -> Result<Option<f64>> {
    let p = match test {
        TestKind::Swap => swap_reject_prob(&states[0], &states[1])?,
        TestKind::Unif => 1.0 - states.iter().map(|s| 1.0 - unif_reject_exact(s)).product::<f64>(),
        TestKind::CondUnif => cond_unif_reject_exact(states, z)?,
        TestKind::Cons | TestKind::ColCons | TestKind::EdgeCons => {
            if states.len() == 2 {
                let b = cons_reject_two(inst, &states[0], &states[1], mode)?;
                match test {
                    TestKind::ColCons => b.col,
                    TestKind::EdgeCons => b.edge,
                    _ => b.total,
                }
            } else if test != TestKind::Cons {
                return Ok(None);
            } else {
                match cons_reject_exact(inst, states, mode, caps) {
                    Ok(p) => p,
                    Err(Error::TooLarge { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                }
            }
        }
        TestKind::Overall => return Err(Error::contract("Overall is not a single test")),
    };
    Ok(Some(p))
}

/// Estimates the rejection probability of a single test from `n_samples`
/// independent runs, alongside its exact value when within `caps`.
///
/// `Unif` over several proofs rejects when any of them rejects, which for two
/// proofs is the composite third test of the two-prover verifier.
#[allow(clippy::too_many_arguments)]
pub fn sample_test(
    test: TestKind,
    inst: &CspInstance,
    states: &[ColoringState],
    mode: EdgeMode,
    z: f64,
    n_samples: u64,
    seed: u64,
    caps: ExactCaps,
) -> Result<TestReport> {
    let prepared = PreparedTest::new(test, inst, states, mode, z)?;
    let exact = exact_test(test, inst, states, mode, z, caps)?;
    let rejects = tally(n_samples, seed, |r, count| {
        let mut scratch = Vec::with_capacity(states.len());
        (0..count).filter(|_| prepared.trial(r, &mut scratch)).count() as u64
    });
    Ok(TestReport::from_counts(test, rejects, n_samples, seed, exact))
}

/// Swap test report; `n_samples = 0` yields the exact value only.
pub fn swap_test_report(s1: &ColoringState, s2: &ColoringState, n_samples: u64, seed: u64) -> Result<TestReport> {
    let p = swap_reject_prob(s1, s2)?;
    if n_samples == 0 {
        return Ok(TestReport::exact(TestKind::Swap, p));
    }
    let rejects = tally(n_samples, seed, |r, count| (0..count).filter(|_| r.random::<f64>() < p).count() as u64);
    Ok(TestReport::from_counts(TestKind::Swap, rejects, n_samples, seed, Some(p)))
}
