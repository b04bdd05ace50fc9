//! Collision statistics of κ independent outcome distributions.
//!
//! `V_ij` indicates that provers `i < j` trigger the consistency test, either
//! by landing on the same vertex with different colors or on the endpoints of
//! a violated edge (read according to the edge mode). `V = Σ_{i<j} V_ij`, and
//! `V = 0` is exactly the event that Cons accepts.

use serde::Serialize;

use crate::csp::{CspInstance, EdgeMode};
use crate::rng::Rng;
use crate::state::OutcomeDistribution;
use crate::verifier::exact::{cons_two_from_dists, pair_fires};
use crate::verifier::sampling::tally;
use crate::{Error, Result};

/// Default budget for the exact variance, in elementary operations.
pub const DEFAULT_EXACT_VARIANCE_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy)]
pub struct CollisionConfig {
    pub mode: EdgeMode,
    pub n_mc: u64,
    pub seed: u64,
    pub exact_variance_cap: u64,
}

impl CollisionConfig {
    pub fn new(mode: EdgeMode, n_mc: u64, seed: u64) -> Self {
        CollisionConfig {
            mode,
            n_mc,
            seed,
            exact_variance_cap: DEFAULT_EXACT_VARIANCE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollisionStats {
    pub kappa: usize,
    /// `E[V_ij]` for `i < j`; zero on and below the diagonal.
    pub pairwise: Vec<Vec<f64>>,
    pub mean: f64,
    pub variance_exact: Option<f64>,
    pub variance_mc: f64,
    /// Standard error of the Monte Carlo variance.
    pub variance_mc_std_error: f64,
    /// `Var / (Var + E[V]²)`, from the exact variance when available.
    pub cantelli_bound: f64,
    /// Set when `E[V] = 0`, in which case the bound is reported as 1.
    pub degenerate_mean: bool,
    pub p_zero_mc: f64,
    pub p_zero_std_error: f64,
    /// `1 - E[V_12]` when κ = 2.
    pub p_zero_exact: Option<f64>,
    pub n_mc: u64,
    pub seed: u64,
}

impl CollisionStats {
    /// Empirical `P[V = 0]` stays below the Cantelli bound up to `z` combined
    /// standard errors (of `P[V = 0]` and, when the bound uses the Monte Carlo
    /// variance, of the bound itself).
    pub fn cantelli_holds(&self, z: f64) -> bool {
        let mut sigma = self.p_zero_std_error.powi(2);
        if self.variance_exact.is_none() && !self.degenerate_mean {
            // d bound / d Var = E² / (Var + E²)²
            let e2 = self.mean * self.mean;
            let d = e2 / (self.variance_mc + e2).powi(2);
            sigma += (d * self.variance_mc_std_error).powi(2);
        }
        self.p_zero_mc <= self.cantelli_bound + z * sigma.sqrt() + 1e-12
    }

    /// Smallest pairwise expectation.
    pub fn min_pairwise(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.kappa {
            for j in i + 1..self.kappa {
                m = m.min(self.pairwise[i][j]);
            }
        }
        m
    }
}

struct Prover<'a> {
    dist: &'a OutcomeDistribution,
    support: Vec<(usize, usize, f64)>,
}

/// `fires(i, x, j, y)` for provers `i ≠ j`, orienting the pair as `(min, max)`.
#[inline]
fn fires(inst: &CspInstance, mode: EdgeMode, i: usize, x: (usize, usize), j: usize, y: (usize, usize)) -> bool {
    if i < j {
        pair_fires(inst, mode, x.0, x.1, y.0, y.1)
    } else {
        pair_fires(inst, mode, y.0, y.1, x.0, x.1)
    }
}

/// Conditional firing probabilities `f(x) = P_j[V_ij = 1 | outcome x of i]`
/// over the support of prover `i`.
fn conditional(inst: &CspInstance, mode: EdgeMode, nbrs: &[Vec<usize>], provers: &[Prover], i: usize, j: usize) -> Vec<f64> {
    let k = inst.alphabet_size();
    let dj = provers[j].dist;
    provers[i]
        .support
        .iter()
        .map(|&(v, c, _)| {
            let mut f = 0.0;
            // same vertex, other color
            for c2 in 0..k {
                if c2 != c && dj.get(v, c2) > 0.0 && fires(inst, mode, i, (v, c), j, (v, c2)) {
                    f += dj.get(v, c2);
                }
            }
            for &w in &nbrs[v] {
                for c2 in 0..k {
                    if w == v && c2 != c {
                        continue; // counted above
                    }
                    let q = dj.get(w, c2);
                    if q > 0.0 && fires(inst, mode, i, (v, c), j, (w, c2)) {
                        f += q;
                    }
                }
            }
            f
        })
        .collect()
}

/// Vertices joined to each vertex by an edge in either orientation.
fn neighbors(inst: &CspInstance) -> Vec<Vec<usize>> {
    let mut nbrs = vec![Vec::new(); inst.n_vertices()];
    for e in inst.edges() {
        nbrs[e.u].push(e.v);
        nbrs[e.v].push(e.u);
    }
    for l in &mut nbrs {
        l.sort_unstable();
        l.dedup();
    }
    nbrs
}

fn exact_variance(inst: &CspInstance, mode: EdgeMode, provers: &[Prover], mean_pairs: &[Vec<f64>]) -> f64 {
    let kappa = provers.len();
    let nbrs = neighbors(inst);
    let mut var = 0.0;
    for (i, row) in mean_pairs.iter().enumerate() {
        for &e in &row[i + 1..] {
            var += e * (1.0 - e);
        }
    }
    let pair_mean = |a: usize, b: usize| if a < b { mean_pairs[a][b] } else { mean_pairs[b][a] };
    for i in 0..kappa {
        let conds: Vec<Option<Vec<f64>>> = (0..kappa)
            .map(|j| (j != i).then(|| conditional(inst, mode, &nbrs, provers, i, j)))
            .collect();
        let p: Vec<f64> = provers[i].support.iter().map(|s| s.2).collect();
        for j in 0..kappa {
            for l in j + 1..kappa {
                if j == i || l == i {
                    continue;
                }
                let (fj, fl) = (conds[j].as_ref().expect("j != i"), conds[l].as_ref().expect("l != i"));
                let joint: f64 = p.iter().zip(fj).zip(fl).map(|((p, a), b)| p * a * b).sum();
                var += 2.0 * (joint - pair_mean(i, j) * pair_mean(i, l));
            }
        }
    }
    var.max(0.0)
}

fn exact_variance_cost(inst: &CspInstance, kappa: usize) -> u128 {
    let nk = (inst.n_vertices() * inst.alphabet_size()) as u128;
    let kk = kappa as u128;
    let deg = 1 + 2 * inst.n_edges() as u128 / inst.n_vertices() as u128;
    kk * kk * nk * inst.alphabet_size() as u128 * (deg + 1) + kk * kk * kk * nk
}

struct Sampler {
    k: usize,
    index: rand::distr::weighted::WeightedIndex<f64>,
}

fn sample_v(
    inst: &CspInstance,
    mode: EdgeMode,
    samplers: &[Sampler],
    rng: &mut Rng,
    buf: &mut Vec<(usize, usize)>,
) -> u64 {
    use rand::distr::Distribution;
    buf.clear();
    for s in samplers {
        let idx = s.index.sample(rng);
        buf.push((idx / s.k, idx % s.k));
    }
    let mut v = 0;
    for b in 1..buf.len() {
        for a in 0..b {
            if pair_fires(inst, mode, buf[a].0, buf[a].1, buf[b].0, buf[b].1) {
                v += 1;
            }
        }
    }
    v
}

/// Exact pairwise expectations, Monte Carlo `Var(V)` and `P[V = 0]`, the
/// exact variance when within budget, and the Cantelli bound.
pub fn collision_stats(
    inst: &CspInstance,
    dists: &[OutcomeDistribution],
    cfg: &CollisionConfig,
) -> Result<CollisionStats> {
    let kappa = dists.len();
    if kappa < 2 {
        return Err(Error::contract("collision statistics need at least two distributions"));
    }
    if cfg.n_mc < 1000 {
        return Err(Error::contract(format!("n_mc = {} below 1000", cfg.n_mc)));
    }
    for d in dists {
        if d.n() != inst.n_vertices() || d.k() != inst.alphabet_size() {
            return Err(Error::dim("distribution shape differs from the instance"));
        }
    }
    let inst = inst.for_mode(cfg.mode);
    let inst = inst.as_ref();
    let k = inst.alphabet_size();

    let mut pairwise = vec![vec![0.0; kappa]; kappa];
    for i in 0..kappa {
        for j in i + 1..kappa {
            pairwise[i][j] = cons_two_from_dists(inst, cfg.mode, k, &dists[i], &dists[j]).total;
        }
    }
    let mean: f64 = pairwise.iter().flatten().sum();

    let provers: Vec<Prover> = dists
        .iter()
        .map(|d| Prover {
            dist: d,
            support: d.support().collect(),
        })
        .collect();
    let variance_exact = (exact_variance_cost(inst, kappa) <= cfg.exact_variance_cap as u128)
        .then(|| exact_variance(inst, cfg.mode, &provers, &pairwise));

    let samplers = dists
        .iter()
        .map(|d| {
            let index = rand::distr::weighted::WeightedIndex::new(d.probs().iter().map(|p| p.max(0.0)))
                .map_err(|e| Error::InvalidState(format!("outcome distribution: {e}")))?;
            Ok(Sampler { k, index })
        })
        .collect::<Result<Vec<_>>>()?;

    // moments packed as [zeros, Σv, Σv², Σv³, Σv⁴] accumulated per chunk
    let moments = std::sync::Mutex::new([0f64; 5]);
    tally(cfg.n_mc, cfg.seed, |r, count| {
        let mut m = [0f64; 5];
        let mut buf = Vec::with_capacity(kappa);
        for _ in 0..count {
            let v = sample_v(inst, cfg.mode, &samplers, r, &mut buf) as f64;
            if v == 0.0 {
                m[0] += 1.0;
            }
            m[1] += v;
            m[2] += v * v;
            m[3] += v * v * v;
            m[4] += v * v * v * v;
        }
        let mut g = moments.lock().expect("moment lock");
        for (a, b) in g.iter_mut().zip(m) {
            *a += b;
        }
        0
    });
    let m = moments.into_inner().expect("moment lock");
    let n = cfg.n_mc as f64;
    let (s1, s2, s3, s4) = (m[1] / n, m[2] / n, m[3] / n, m[4] / n);
    let var_mc = (s2 - s1 * s1).max(0.0) * n / (n - 1.0);
    let mu4 = s4 - 4.0 * s3 * s1 + 6.0 * s2 * s1 * s1 - 3.0 * s1.powi(4);
    let var_mc_se = ((mu4 - var_mc * var_mc).max(0.0) / n).sqrt();
    let p_zero = m[0] / n;

    let var = variance_exact.unwrap_or(var_mc);
    let degenerate = mean <= 0.0;
    let cantelli_bound = if degenerate { 1.0 } else { var / (var + mean * mean) };
    Ok(CollisionStats {
        kappa,
        p_zero_exact: (kappa == 2).then(|| 1.0 - pairwise[0][1]),
        pairwise,
        mean,
        variance_exact,
        variance_mc: var_mc,
        variance_mc_std_error: var_mc_se,
        cantelli_bound,
        degenerate_mean: degenerate,
        p_zero_mc: p_zero,
        p_zero_std_error: (p_zero * (1.0 - p_zero) / n).sqrt(),
        n_mc: cfg.n_mc,
        seed: cfg.seed,
    })
}

/// Support deficiency `ε` of a distribution whose vertex marginal is uniform
/// on its support `S`: `1 - |S|/N`. `None` if the marginal is not uniform on
/// its support (within `1e-9`).
pub fn uniform_support_deficiency(d: &OutcomeDistribution) -> Option<f64> {
    let n = d.n();
    let marg: Vec<f64> = (0..n).map(|v| (0..d.k()).map(|j| d.get(v, j)).sum()).collect();
    let support: Vec<f64> = marg.iter().copied().filter(|&p| p > 1e-15).collect();
    let target = 1.0 / support.len() as f64;
    support
        .iter()
        .all(|&p| (p - target).abs() <= 1e-9)
        .then(|| 1.0 - support.len() as f64 / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapPrecondition {
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    /// `ε < η / 20`; absent when either is unknown.
    pub epsilon_small: Option<bool>,
    /// `E[V_ij] ≥ ε/N` for every pair.
    pub pair_floor_holds: Option<bool>,
}

/// Checks the support-uniformity precondition and the pairwise floor.
pub fn gap_precondition(stats: &CollisionStats, dists: &[OutcomeDistribution], eta: Option<f64>) -> GapPrecondition {
    let eps = dists
        .iter()
        .map(uniform_support_deficiency)
        .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)));
    let n = dists[0].n() as f64;
    GapPrecondition {
        epsilon: eps,
        eta,
        epsilon_small: eps.zip(eta).map(|(e, h)| e < h / 20.0),
        pair_floor_holds: eps.map(|e| stats.min_pairwise() >= e / n - 1e-15),
    }
}
