use rand::seq::index::sample;
use rand_distr::{Distribution, StandardNormal};

use super::{ColoringState, C64};
use crate::csp::Coloring;
use crate::rng::{self, Rng};
use crate::{Error, Result};

/// Families of random coloring states used as test inputs and as optimizer
/// starting points.
#[derive(Debug, Clone, PartialEq)]
pub enum StateProfile {
    /// Each register independently Haar-uniform.
    Haar,
    /// The honest encoding of `coloring` plus complex Gaussian noise of scale
    /// `eps` on every amplitude, renormalized per register.
    PerturbedHonest { eps: f64, coloring: Coloring },
    /// Vertex amplitudes Haar-uniform on `m` random vertices, zero elsewhere;
    /// color registers Haar-uniform.
    SparseSupport { m: usize },
}

impl std::str::FromStr for StateProfile {
    type Err = Error;

    /// Parses `haar` or `sparse:<m>`. The perturbed profile needs a coloring
    /// and is only available programmatically.
    fn from_str(s: &str) -> Result<Self> {
        if s == "haar" {
            return Ok(StateProfile::Haar);
        }
        if let Some(m) = s.strip_prefix("sparse:") {
            let m = m
                .parse()
                .map_err(|_| Error::contract(format!("bad support size in profile {s:?}")))?;
            return Ok(StateProfile::SparseSupport { m });
        }
        Err(Error::contract(format!("unknown state profile {s:?}")))
    }
}

fn gaussian(rng: &mut Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Deterministic in `seed`.
pub fn random_state(n: usize, k: usize, seed: u64, profile: &StateProfile) -> Result<ColoringState> {
    if n == 0 || k == 0 {
        return Err(Error::contract("register dimensions must be positive"));
    }
    let mut rng = rng::stream(seed, 0);
    random_state_with(&mut rng, n, k, profile)
}

pub(crate) fn random_state_with(
    rng: &mut Rng,
    n: usize,
    k: usize,
    profile: &StateProfile,
) -> Result<ColoringState> {
    match profile {
        StateProfile::Haar => {
            let a = (0..n).map(|_| gaussian(rng)).collect();
            let b = (0..n * k).map(|_| gaussian(rng)).collect();
            Ok(ColoringState::normalized(n, k, a, b))
        }
        StateProfile::PerturbedHonest { eps, coloring } => {
            if coloring.len() != n || coloring.colors().iter().any(|&c| c >= k) {
                return Err(Error::contract("perturbation base coloring does not fit the registers"));
            }
            if !(*eps >= 0.0) {
                return Err(Error::contract(format!("noise scale {eps} must be nonnegative")));
            }
            let honest = ColoringState::honest(k, coloring);
            if *eps == 0.0 {
                return Ok(honest);
            }
            let a = honest.alphas().iter().map(|&x| x + gaussian(rng) * *eps).collect();
            let b = honest.betas_flat().iter().map(|&x| x + gaussian(rng) * *eps).collect();
            Ok(ColoringState::normalized(n, k, a, b))
        }
        StateProfile::SparseSupport { m } => {
            if *m == 0 || *m > n {
                return Err(Error::contract(format!("support size {m} outside 1..={n}")));
            }
            let mut a = vec![C64::new(0.0, 0.0); n];
            for v in sample(rng, n, *m) {
                a[v] = gaussian(rng);
            }
            let b = (0..n * k).map(|_| gaussian(rng)).collect();
            Ok(ColoringState::normalized(n, k, a, b))
        }
    }
}
