//! Search for product-state proofs that a verifier accepts with high
//! probability.
//!
//! Results are empirical lower bounds on the best cheating acceptance; nothing
//! here certifies optimality.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::bounds::bt09_constants;
use crate::csp::{local_search, Coloring, CspInstance, Oracle};
use crate::rng::{self, Rng};

use crate::state::{random_state_with, ColoringState, StateProfile, C64};
use crate::verifier::{run_verifier_exact, run_verifier_sampled, ExactCaps, Protocol, VerifierConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyClass {
    /// Arbitrary product proofs, one state per prover.
    GeneralProduct,
    /// Every prover sends the honest encoding of one shared coloring.
    ClassicalSuperposition,
    /// Every prover sends a uniform superposition over a shared vertex subset,
    /// each vertex carrying one basis color.
    ClassicalMixtureSupport,
}

impl StrategyClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyClass::GeneralProduct => "general-product",
            StrategyClass::ClassicalSuperposition => "classical-superposition",
            StrategyClass::ClassicalMixtureSupport => "classical-mixture-support",
        }
    }
}

impl std::str::FromStr for StrategyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general-product" => Ok(StrategyClass::GeneralProduct),
            "classical-superposition" => Ok(StrategyClass::ClassicalSuperposition),
            "classical-mixture-support" => Ok(StrategyClass::ClassicalMixtureSupport),
            other => Err(Error::contract(format!("unknown strategy class {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub verifier: VerifierConfig,
    pub restarts: usize,
    /// Ascent iterations per restart.
    pub max_iters: usize,
    pub step: f64,
    /// Step multiplier after a failed line-search trial.
    pub decay: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    pub seed: u64,
    pub class: StrategyClass,
    /// Random product proofs evaluated before the ascent.
    pub probes: usize,
    /// Samples per objective evaluation when the exact evaluator is over
    /// budget.
    pub fallback_samples: u64,
}

impl AttackConfig {
    pub fn new(verifier: VerifierConfig, seed: u64) -> Self {
        AttackConfig {
            verifier,
            restarts: 20,
            max_iters: 200,
            step: 0.1,
            decay: 0.5,
            fd_step: 1e-5,
            seed,
            class: StrategyClass::GeneralProduct,
            probes: 0,
            fallback_samples: 20_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.verifier.validate()?;
        if self.restarts == 0 {
            return Err(Error::contract("restarts must be at least 1"));
        }
        if !(self.fd_step > 0.0) {
            return Err(Error::contract("finite-difference step must be positive"));
        }
        if !(self.step > 0.0) || !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::contract("need step > 0 and decay in (0, 1)"));
        }
        Ok(())
    }
}

/// Consecutive line-search failures that end a restart.
pub const MAX_FAILURES: usize = 10;
/// Smallest step tried before a restart gives up.
pub const STEP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Objective {
    Exact,
    /// Monte Carlo with common random numbers across evaluations.
    Sampled { n_samples: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartTrace {
    pub restart: usize,
    pub init: String,
    /// `(iteration, acceptance)` after each accepted step, starting at 0.
    pub trace: Vec<(usize, f64)>,
    pub final_acceptance: f64,
    pub improved: bool,
}

fn ser_states<S: Serializer>(states: &[ColoringState], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(states.iter().map(crate::io::state_to_value))
}

#[derive(Debug, Clone, Serialize)]
pub struct AttackResult {
    #[serde(serialize_with = "ser_states")]
    pub best_states: Vec<ColoringState>,
    /// Acceptance of `best_states`, recomputed after the search.
    pub best_acceptance: f64,
    /// Restart that produced the best proofs; `None` when a probe did.
    pub best_restart: Option<usize>,
    pub probes_evaluated: usize,
    pub probe_best: Option<f64>,
    pub traces: Vec<RestartTrace>,
    pub config: AttackConfig,
    pub objective: Objective,
    /// `1 - s` for the two-prover verifier.
    pub acceptance_ceiling: Option<f64>,
    /// From the brute-force oracle, when applicable.
    pub unsatisfiable: Option<bool>,
    pub wall_time_secs: f64,
}

impl AttackResult {
    /// True when proofs above `1 - s` were found on an unsatisfiable instance.
    pub fn floor_violated(&self) -> bool {
        match (self.acceptance_ceiling, self.unsatisfiable) {
            (Some(c), Some(true)) => self.best_acceptance > c,
            _ => false,
        }
    }
}

struct Evaluator<'a> {
    inst: &'a CspInstance,
    cfg: &'a AttackConfig,
    objective: Objective,
    caps: ExactCaps,
}

impl<'a> Evaluator<'a> {
    fn new(inst: &'a CspInstance, cfg: &'a AttackConfig, caps: ExactCaps) -> Result<Self> {
        let probe = ColoringState::honest(inst.alphabet_size(), &Coloring(vec![0; inst.n_vertices()]));
        let states = vec![probe; cfg.verifier.kappa];
        let objective = match run_verifier_exact(&cfg.verifier, inst, &states, caps) {
            Ok(_) => Objective::Exact,
            Err(Error::TooLarge { .. }) => Objective::Sampled {
                n_samples: cfg.fallback_samples.max(1),
            },
            Err(e) => return Err(e),
        };
        Ok(Evaluator {
            inst,
            cfg,
            objective,
            caps,
        })
    }

    fn acceptance(&self, states: &[ColoringState]) -> Result<f64> {
        match self.objective {
            Objective::Exact => Ok(run_verifier_exact(&self.cfg.verifier, self.inst, states, self.caps)?.acceptance),
            Objective::Sampled { n_samples } => {
                let r = run_verifier_sampled(&self.cfg.verifier, self.inst, states, n_samples, self.cfg.seed, self.caps)?;
                Ok(1.0 - r.overall.sampled_reject.unwrap_or(0.0))
            }
        }
    }
}

/// Real parameterization of κ product proofs: per prover, `2N` reals for the
/// vertex register then `2NK` for the color registers.
#[derive(Debug, Clone)]
struct Params {
    n: usize,
    k: usize,
    kappa: usize,
    x: Vec<f64>,
}

impl Params {
    fn width(n: usize, k: usize) -> usize {
        2 * n + 2 * n * k
    }

    fn from_states(states: &[ColoringState]) -> Self {
        let (n, k) = (states[0].n(), states[0].k());
        let mut x = Vec::with_capacity(states.len() * Self::width(n, k));
        for s in states {
            for a in s.alphas() {
                x.extend([a.re, a.im]);
            }
            for v in 0..n {
                for b in s.beta_row(v) {
                    x.extend([b.re, b.im]);
                }
            }
        }
        Params {
            n,
            k,
            kappa: states.len(),
            x,
        }
    }

    fn states_at(&self, x: &[f64]) -> Vec<ColoringState> {
        let w = Self::width(self.n, self.k);
        (0..self.kappa)
            .map(|i| {
                let p = &x[i * w..(i + 1) * w];
                let alpha: Vec<C64> = p[..2 * self.n].chunks(2).map(|c| C64::new(c[0], c[1])).collect();
                let beta: Vec<C64> = p[2 * self.n..].chunks(2).map(|c| C64::new(c[0], c[1])).collect();
                ColoringState::normalized(self.n, self.k, alpha, beta)
            })
            .collect()
    }

    /// Replaces `x` by the parameters of its projection.
    fn project(&mut self) {
        let states = self.states_at(&self.x);
        self.x = Params::from_states(&states).x;
    }
}

fn gradient(eval: &Evaluator, p: &Params, h: f64) -> Result<Vec<f64>> {
    let mut x = p.x.clone();
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() {
        let orig = x[i];
        x[i] = orig + h;
        let fp = eval.acceptance(&p.states_at(&x))?;
        x[i] = orig - h;
        let fm = eval.acceptance(&p.states_at(&x))?;
        x[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    Ok(g)
}

type Ascent = (Vec<ColoringState>, f64, Vec<(usize, f64)>);

/// Projected ascent from `start`; returns the final proofs, their acceptance
/// and the trace.
fn ascend(eval: &Evaluator, start: Vec<ColoringState>, cfg: &AttackConfig) -> Result<Ascent> {
    let mut p = Params::from_states(&start);
    let mut cur = eval.acceptance(&start)?;
    let mut states = start;
    let mut trace = vec![(0, cur)];
    let mut step = cfg.step;
    let mut failures = 0;
    for iter in 1..=cfg.max_iters {
        let g = gradient(eval, &p, cfg.fd_step)?;
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            break;
        }
        let mut moved = false;
        while step >= STEP_FLOOR && failures < MAX_FAILURES {
            let mut trial = p.clone();
            for (x, gi) in trial.x.iter_mut().zip(&g) {
                *x += step * gi / norm;
            }
            trial.project();
            let candidate = trial.states_at(&trial.x);
            let f = eval.acceptance(&candidate)?;
            if f >= cur {
                p = trial;
                states = candidate;
                cur = f;
                failures = 0;
                moved = true;
                break;
            }
            step *= cfg.decay;
            failures += 1;
        }
        if !moved {
            break;
        }
        trace.push((iter, cur));
    }
    Ok((states, cur, trace))
}

fn best_coloring(inst: &CspInstance) -> Result<Coloring> {
    let oracle = Oracle::default();
    if oracle.applicable(inst) {
        Ok(oracle.best(inst)?.coloring)
    } else {
        local_search(inst, &Coloring(vec![0; inst.n_vertices()]))
    }
}

const PERTURBATIONS: [f64; 4] = [0.0, 0.02, 0.1, 0.3];

/// Starting proofs for restart `r`: even restarts draw Haar-random registers,
/// odd restarts perturb the honest encoding of the best known coloring.
fn initial(rng: &mut Rng, inst: &CspInstance, kappa: usize, r: usize, best: &Coloring) -> Result<(Vec<ColoringState>, String)> {
    let (n, k) = (inst.n_vertices(), inst.alphabet_size());
    if r.is_multiple_of(2) {
        let states = (0..kappa)
            .map(|_| random_state_with(rng, n, k, &StateProfile::Haar))
            .collect::<Result<Vec<_>>>()?;
        Ok((states, "haar".into()))
    } else {
        let eps = PERTURBATIONS[(r / 2) % PERTURBATIONS.len()];
        let profile = StateProfile::PerturbedHonest {
            eps,
            coloring: best.clone(),
        };
        let states = (0..kappa)
            .map(|_| random_state_with(rng, n, k, &profile))
            .collect::<Result<Vec<_>>>()?;
        Ok((states, format!("perturbed-honest:{eps}")))
    }
}

fn probe_profile(rng: &mut Rng, i: usize, n: usize, best: &Coloring) -> StateProfile {
    use rand::Rng as _;
    match i % 3 {
        0 => StateProfile::Haar,
        1 => StateProfile::SparseSupport {
            m: rng.random_range(1..=n),
        },
        _ => StateProfile::PerturbedHonest {
            eps: 10f64.powf(rng.random_range(-4.0..0.0)),
            coloring: best.clone(),
        },
    }
}

/// Discrete strategy of the restricted classes: a shared coloring and, for
/// the mixture class, a shared support.
#[derive(Debug, Clone, PartialEq)]
struct Discrete {
    colors: Vec<usize>,
    support: Vec<bool>,
}

impl Discrete {
    fn states(&self, k: usize, kappa: usize) -> Vec<ColoringState> {
        let n = self.colors.len();
        let m = self.support.iter().filter(|&&b| b).count().max(1) as f64;
        let alpha: Vec<C64> = self
            .support
            .iter()
            .map(|&b| C64::new(if b { 1.0 / m.sqrt() } else { 0.0 }, 0.0))
            .collect();
        let mut beta = vec![C64::new(0.0, 0.0); n * k];
        for (v, &c) in self.colors.iter().enumerate() {
            beta[v * k + c] = C64::new(1.0, 0.0);
        }
        vec![ColoringState::normalized(n, k, alpha, beta); kappa]
    }

    /// Single-vertex moves: recolor, and for the mixture class toggle
    /// membership while keeping the support non-empty.
    fn neighbors(&self, k: usize, mixture: bool) -> Vec<Discrete> {
        let mut out = Vec::new();
        for v in 0..self.colors.len() {
            for c in 0..k {
                if c != self.colors[v] {
                    let mut d = self.clone();
                    d.colors[v] = c;
                    out.push(d);
                }
            }
            if mixture {
                let mut d = self.clone();
                d.support[v] = !d.support[v];
                if d.support.iter().any(|&b| b) {
                    out.push(d);
                }
            }
        }
        out
    }
}

fn discrete_restart(
    eval: &Evaluator,
    rng: &mut Rng,
    inst: &CspInstance,
    cfg: &AttackConfig,
    r: usize,
    best: &Coloring,
) -> Result<(Vec<ColoringState>, f64, RestartTrace)> {
    use rand::Rng as _;
    let (n, k, kappa) = (inst.n_vertices(), inst.alphabet_size(), cfg.verifier.kappa);
    let mixture = cfg.class == StrategyClass::ClassicalMixtureSupport;
    let mut cur = if r == 0 {
        Discrete {
            colors: best.0.clone(),
            support: vec![true; n],
        }
    } else {
        let colors = (0..n).map(|_| rng.random_range(0..k)).collect();
        let mut support: Vec<bool> = (0..n).map(|_| !mixture || rng.random_bool(0.7)).collect();
        if !support.iter().any(|&b| b) {
            support[0] = true;
        }
        Discrete { colors, support }
    };
    let init = if r == 0 { "best-coloring" } else { "random" };
    let mut f = eval.acceptance(&cur.states(k, kappa))?;
    let start = f;
    let mut trace = vec![(0, f)];
    for iter in 1..=cfg.max_iters {
        let mut improved = None;
        for d in cur.neighbors(k, mixture) {
            let g = eval.acceptance(&d.states(k, kappa))?;
            if g > f && improved.as_ref().is_none_or(|(bg, _)| g > *bg) {
                improved = Some((g, d));
            }
        }
        match improved {
            Some((g, d)) => {
                f = g;
                cur = d;
                trace.push((iter, f));
            }
            None => break,
        }
    }
    let states = cur.states(k, kappa);
    Ok((
        states,
        f,
        RestartTrace {
            restart: r,
            init: init.into(),
            trace,
            final_acceptance: f,
            improved: f > start,
        },
    ))
}

fn finish(
    inst: &CspInstance,
    cfg: &AttackConfig,
    eval: &Evaluator,
    candidates: Vec<(Vec<ColoringState>, f64, Option<usize>)>,
    traces: Vec<RestartTrace>,
    probes: (usize, Option<f64>),
    started: Instant,
) -> Result<AttackResult> {
    let mut best: Option<(Vec<ColoringState>, f64, Option<usize>)> = None;
    for c in candidates {
        if best.as_ref().is_none_or(|b| c.1 > b.1) {
            best = Some(c);
        }
    }
    let (states, _, best_restart) = best.ok_or_else(|| Error::contract("no candidate proofs"))?;
    let best_acceptance = eval.acceptance(&states)?;
    let oracle = Oracle::default();
    let unsatisfiable = if oracle.applicable(inst) {
        Some(oracle.best(inst)?.fraction < num_rational::Ratio::from_integer(1))
    } else {
        None
    };
    let acceptance_ceiling = match cfg.verifier.protocol {
        Protocol::Bt09 => Some(bt09_constants(inst.n_vertices() as u64, inst.alphabet_size() as u64)?.acceptance_ceiling()),
        Protocol::Cd10 => None,
    };
    Ok(AttackResult {
        best_states: states,
        best_acceptance,
        best_restart,
        probes_evaluated: probes.0,
        probe_best: probes.1,
        traces,
        config: cfg.clone(),
        objective: eval.objective,
        acceptance_ceiling,
        unsatisfiable,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

/// Best-of-restarts search within `cfg.class`. Deterministic in `cfg.seed`;
/// restart `r` draws from stream `r + 1` and probe `i` from stream
/// `restarts + 1 + i`.
pub fn attack(inst: &CspInstance, cfg: &AttackConfig, caps: ExactCaps) -> Result<AttackResult> {
    let started = Instant::now();
    cfg.validate()?;
    let eval = Evaluator::new(inst, cfg, caps)?;
    let best = best_coloring(inst)?;
    let (n, k, kappa) = (inst.n_vertices(), inst.alphabet_size(), cfg.verifier.kappa);

    let runs = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(cfg.seed, r as u64 + 1);
            match cfg.class {
                StrategyClass::GeneralProduct => {
                    let (start, init) = initial(&mut rng, inst, kappa, r, &best)?;
                    let (states, f, trace) = ascend(&eval, start, cfg)?;
                    let first = trace[0].1;
                    Ok((
                        states,
                        f,
                        RestartTrace {
                            restart: r,
                            init,
                            trace,
                            final_acceptance: f,
                            improved: f > first,
                        },
                    ))
                }
                _ => discrete_restart(&eval, &mut rng, inst, cfg, r, &best),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let probe_vals = (0..cfg.probes)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(cfg.seed, (cfg.restarts + 1 + i) as u64);
            let profile = probe_profile(&mut rng, i, n, &best);
            let states = (0..kappa)
                .map(|_| random_state_with(&mut rng, n, k, &profile))
                .collect::<Result<Vec<_>>>()?;
            let f = eval.acceptance(&states)?;
            Ok((states, f))
        })
        .collect::<Result<Vec<_>>>()?;
    let probe_best = probe_vals.iter().map(|p| p.1).fold(None, |m: Option<f64>, f| Some(m.map_or(f, |m| m.max(f))));

    let mut candidates = Vec::with_capacity(runs.len() + probe_vals.len());
    let mut traces = Vec::with_capacity(runs.len());
    for (r, (states, f, trace)) in runs.into_iter().enumerate() {
        candidates.push((states, f, Some(r)));
        traces.push(trace);
    }
    candidates.extend(probe_vals.into_iter().map(|(s, f)| (s, f, None)));
    finish(inst, cfg, &eval, candidates, traces, (cfg.probes, probe_best), started)
}

/// Cap on shared colorings for the superposition class.
pub const EXHAUSTIVE_COLORING_CAP: u64 = 100_000;
/// Cap on (support, coloring) pairs for the mixture class.
pub const EXHAUSTIVE_MIXTURE_CAP: u64 = 1_000_000;

/// Brute force over the discrete strategy class `cfg.class`, with all provers
/// sending the same state. Ties keep the first strategy in enumeration order
/// (vertex 0 least significant).
pub fn exhaustive_classical_attack(inst: &CspInstance, cfg: &AttackConfig, caps: ExactCaps) -> Result<AttackResult> {
    let started = Instant::now();
    cfg.validate()?;
    let (n, k, kappa) = (inst.n_vertices(), inst.alphabet_size(), cfg.verifier.kappa);
    let (radix, cap) = match cfg.class {
        StrategyClass::ClassicalSuperposition => (k, EXHAUSTIVE_COLORING_CAP),
        StrategyClass::ClassicalMixtureSupport => (k + 1, EXHAUSTIVE_MIXTURE_CAP),
        StrategyClass::GeneralProduct => {
            return Err(Error::contract("exhaustive search needs a discrete strategy class"))
        }
    };
    let total = (radix as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::TooLarge {
            what: format!("{} strategy space", cfg.class.as_str()),
            size: total,
            cap,
        });
    }
    let eval = Evaluator::new(inst, cfg, caps)?;
    let decode = |mut code: u64| -> Option<Discrete> {
        let mut colors = vec![0; n];
        let mut support = vec![true; n];
        for v in 0..n {
            let d = (code % radix as u64) as usize;
            code /= radix as u64;
            if radix == k {
                colors[v] = d;
            } else if d == k {
                support[v] = false;
            } else {
                colors[v] = d;
            }
        }
        support.iter().any(|&b| b).then_some(Discrete { colors, support })
    };
    let block = 1024u64;
    let total = total as u64;
    let best = (0..total.div_ceil(block))
        .into_par_iter()
        .map(|b| -> Result<Option<(f64, u64)>> {
            let mut best: Option<(f64, u64)> = None;
            for code in b * block..((b + 1) * block).min(total) {
                if let Some(d) = decode(code) {
                    let f = eval.acceptance(&d.states(k, kappa))?;
                    if best.is_none_or(|(bf, _)| f > bf) {
                        best = Some((f, code));
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(f64, u64)>, x| match acc {
            Some(a) if a.0 >= x.0 => Some(a),
            _ => Some(x),
        });
    let (f, code) = best.ok_or_else(|| Error::contract("empty strategy space"))?;
    let d = decode(code).expect("decoded during search");
    let trace = RestartTrace {
        restart: 0,
        init: format!("exhaustive:{total}"),
        trace: vec![(0, f)],
        final_acceptance: f,
        improved: false,
    };
    finish(inst, cfg, &eval, vec![(d.states(k, kappa), f, Some(0))], vec![trace], (0, None), started)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{generate_one_bad_edge, generate_regular_gap_instance, EdgeMode, GapMode};
    use crate::verifier::{cons_reject_two, ExactCaps};

    fn bt09() -> VerifierConfig {
        VerifierConfig::bt09(EdgeMode::AsListed)
    }

    #[test]
    fn satisfiable_classical_reaches_one() {
        let g = generate_regular_gap_instance(6, 3, 2, 0, GapMode::Planted).unwrap();
        let mut cfg = AttackConfig::new(bt09(), 1);
        cfg.class = StrategyClass::ClassicalSuperposition;
        cfg.restarts = 3;
        let r = attack(&g.instance, &cfg, ExactCaps::default()).unwrap();
        assert!((r.best_acceptance - 1.0).abs() < 1e-12);
        let e = exhaustive_classical_attack(&g.instance, &cfg, ExactCaps::default()).unwrap();
        assert!((e.best_acceptance - 1.0).abs() < 1e-12);
        assert_eq!(e.unsatisfiable, Some(false));
    }

    #[test]
    fn zero_iterations_return_initial_acceptance() {
        let (inst, _) = generate_one_bad_edge(4, 2, 0).unwrap();
        let mut cfg = AttackConfig::new(bt09(), 5);
        cfg.restarts = 1;
        cfg.max_iters = 0;
        let r = attack(&inst, &cfg, ExactCaps::default()).unwrap();
        let mut rng = rng::stream(5, 1);
        let best = best_coloring(&inst).unwrap();
        let (start, _) = initial(&mut rng, &inst, 2, 0, &best).unwrap();
        let f = run_verifier_exact(&bt09(), &inst, &start, ExactCaps::default()).unwrap().acceptance;
        assert_eq!(r.best_acceptance, f);
        assert_eq!(r.traces[0].trace, vec![(0, f)]);
    }

    #[test]
    fn exhaustive_matches_best_coloring() {
        let (inst, _) = generate_one_bad_edge(4, 2, 0).unwrap();
        let mut cfg = AttackConfig::new(bt09(), 0);
        cfg.class = StrategyClass::ClassicalSuperposition;
        let r = exhaustive_classical_attack(&inst, &cfg, ExactCaps::default()).unwrap();
        // independent scan over all 2^4 colorings
        let mut best = 0.0f64;
        for code in 0..16usize {
            let col = Coloring((0..4).map(|v| (code >> v) & 1).collect());
            let s = ColoringState::from_coloring(&inst, &col).unwrap();
            let cons = cons_reject_two(&inst, &s, &s, EdgeMode::AsListed).unwrap().total;
            best = best.max(1.0 - cons / 3.0);
        }
        assert!((r.best_acceptance - best).abs() < 1e-12);
        let again = exhaustive_classical_attack(&inst, &cfg, ExactCaps::default()).unwrap();
        assert_eq!(again.best_acceptance, r.best_acceptance);
        assert_eq!(again.best_states, r.best_states);
    }

    #[test]
    fn mixture_class_and_caps() {
        let (inst, _) = generate_one_bad_edge(4, 2, 1).unwrap();
        let mut cfg = AttackConfig::new(bt09(), 0);
        cfg.class = StrategyClass::ClassicalMixtureSupport;
        let m = exhaustive_classical_attack(&inst, &cfg, ExactCaps::default()).unwrap();
        cfg.class = StrategyClass::ClassicalSuperposition;
        let s = exhaustive_classical_attack(&inst, &cfg, ExactCaps::default()).unwrap();
        // the mixture class contains the superposition class
        assert!(m.best_acceptance >= s.best_acceptance - 1e-15);
        let (big, _) = generate_one_bad_edge(12, 3, 0).unwrap();
        assert!(matches!(
            exhaustive_classical_attack(&big, &cfg, ExactCaps::default()),
            Err(Error::TooLarge { .. })
        ));
        cfg.class = StrategyClass::GeneralProduct;
        assert!(exhaustive_classical_attack(&inst, &cfg, ExactCaps::default()).is_err());
    }

    #[test]
    fn ascent_is_monotone_and_deterministic() {
        let (inst, _) = generate_one_bad_edge(4, 3, 2).unwrap();
        let mut cfg = AttackConfig::new(bt09(), 9);
        cfg.restarts = 4;
        cfg.max_iters = 15;
        cfg.probes = 20;
        let a = attack(&inst, &cfg, ExactCaps::default()).unwrap();
        let b = attack(&inst, &cfg, ExactCaps::default()).unwrap();
        assert_eq!(a.best_acceptance, b.best_acceptance);
        assert_eq!(a.best_states, b.best_states);
        for t in &a.traces {
            assert!(t.trace.windows(2).all(|w| w[1].1 >= w[0].1));
        }
        for s in &a.best_states {
            let na: f64 = s.alphas().iter().map(|x| x.norm_sqr()).sum();
            assert!((na - 1.0).abs() < 1e-9);
        }
        assert!(!a.floor_violated());
    }

    #[test]
    fn config_validation() {
        let mut cfg = AttackConfig::new(bt09(), 0);
        cfg.restarts = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = AttackConfig::new(bt09(), 0);
        cfg.fd_step = 0.0;
        assert!(cfg.validate().is_err());
    }
}
