//! Exact rejection probabilities on product-state proofs.

use crate::csp::{CspInstance, EdgeMode};
use crate::state::{apply_fourier, ColoringState, OutcomeDistribution};
use crate::{Error, Result, DEFAULT_ENUMERATION_CAP};

/// REJ(Unif): probability of outcome `(v ≠ 0, j = 0)` after `F_N ⊗ F_K`.
///
/// The color-0 column of `(F_N ⊗ F_K)|Ψ⟩` is `F_N w` with
/// `w_v = α_v Σ_j β_{v,j} / √K`. Its total mass is `‖w‖²` by unitarity and its
/// `v = 0` entry is `Σ_v w_v / √N`, so the rejection mass is
/// `‖w‖² - |Σ_v w_v|² / N`.
pub fn unif_reject_exact(state: &ColoringState) -> f64 {
    let s = zero_color_stats(state);
    (s.q - s.r).max(0.0)
}

/// REJ(Unif) by applying the full `F_N ⊗ F_K` and summing `|Φ(v, 0)|²` over
/// `v ≠ 0`. Quadratic in `N`; used as a cross-check.
pub fn unif_reject_full(state: &ColoringState) -> f64 {
    let phi = apply_fourier(state, true, true);
    (1..state.n()).map(|v| phi.get(v, 0).norm_sqr()).sum()
}

/// Per-prover Fourier color-0 statistics for CondUnif.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroColorStats {
    /// `P[j = 0]`
    pub q: f64,
    /// `P[j = 0 ∧ v = 0]`
    pub r: f64,
}

pub fn zero_color_stats(state: &ColoringState) -> ZeroColorStats {
    let w = state.fourier_zero_color();
    let q: f64 = w.iter().map(|a| a.norm_sqr()).sum();
    let r = w.iter().sum::<crate::state::C64>().norm_sqr() / state.n() as f64;
    ZeroColorStats { q, r: r.min(q) }
}

/// Smallest zero-count that passes the `z > count` rejection rule. A 1e-9
/// slack absorbs rounding in thresholds computed as fractions of κ.
pub fn cond_unif_threshold(z: f64) -> usize {
    (z - 1e-9).ceil().max(0.0) as usize
}

/// REJ(CondUnif_z).
///
/// Each prover independently lands in one of three classes: a good zero
/// (`j = 0, v = 0`, weight `r_i`), a nonzero color (weight `1 - q_i`), or a bad
/// zero (`j = 0, v ≠ 0`, weight `q_i - r_i`, always rejecting). The dynamic
/// program tracks the distribution of the good-zero count over runs with no
/// bad zero; acceptance is its mass at counts `≥ ⌈z⌉`.
pub fn cond_unif_reject_exact(states: &[ColoringState], z: f64) -> Result<f64> {
    let kappa = states.len();
    check_shapes(states)?;
    if !(z >= 0.0 && z <= kappa as f64) {
        return Err(Error::contract(format!("z = {z} outside [0, {kappa}]")));
    }
    let stats: Vec<ZeroColorStats> = states.iter().map(zero_color_stats).collect();
    Ok(cond_unif_reject_from_stats(&stats, z))
}

pub(crate) fn cond_unif_reject_from_stats(stats: &[ZeroColorStats], z: f64) -> f64 {
    let mut dp = vec![0.0; stats.len() + 1];
    dp[0] = 1.0;
    for (i, s) in stats.iter().enumerate() {
        let nonzero = (1.0 - s.q).max(0.0);
        for m in (0..=i + 1).rev() {
            let stay = dp[m] * nonzero;
            let step = if m > 0 { dp[m - 1] * s.r } else { 0.0 };
            dp[m] = stay + step;
        }
    }
    let need = cond_unif_threshold(z);
    let accept: f64 = dp.iter().skip(need).sum();
    (1.0 - accept).clamp(0.0, 1.0)
}

fn check_shapes(states: &[ColoringState]) -> Result<()> {
    if let Some(first) = states.first() {
        for s in &states[1..] {
            first.same_shape(s)?;
        }
    }
    Ok(())
}

/// Budget for exact κ-prover enumeration.
#[derive(Debug, Clone, Copy)]
pub struct ExactCaps {
    pub max_kappa: usize,
    /// Cap on `(N K)^κ`.
    pub enumeration: u64,
}

impl Default for ExactCaps {
    fn default() -> Self {
        ExactCaps {
            max_kappa: 6,
            enumeration: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl ExactCaps {
    pub fn check(&self, n: usize, k: usize, kappa: usize) -> Result<()> {
        if kappa > self.max_kappa {
            return Err(Error::TooLarge {
                what: "prover count for exact Cons".into(),
                size: kappa as u128,
                cap: self.max_kappa as u64,
            });
        }
        let size = ((n * k) as u128).checked_pow(kappa as u32).unwrap_or(u128::MAX);
        if size > self.enumeration as u128 {
            return Err(Error::TooLarge {
                what: "Cons outcome space".into(),
                size,
                cap: self.enumeration,
            });
        }
        Ok(())
    }
}

/// Whether outcomes `(va, ja)` of prover `a` and `(vb, jb)` of a later prover
/// `b` trigger the Cons test. `inst` must already reflect the edge mode
/// (symmetrized when requested).
#[inline]
pub(crate) fn pair_fires(inst: &CspInstance, mode: EdgeMode, va: usize, ja: usize, vb: usize, jb: usize) -> bool {
    color_clause(va, ja, vb, jb) || edge_clause(inst, mode, va, ja, vb, jb)
}

#[inline]
fn color_clause(va: usize, ja: usize, vb: usize, jb: usize) -> bool {
    va == vb && ja != jb
}

#[inline]
pub(crate) fn edge_clause(inst: &CspInstance, mode: EdgeMode, va: usize, ja: usize, vb: usize, jb: usize) -> bool {
    inst.violates(va, ja, vb, jb) || (mode != EdgeMode::ProverOrdered && inst.violates(vb, jb, va, ja))
}

/// REJ(Cons) by enumerating every outcome tuple of the κ provers.
///
/// The search proceeds prover by prover; a partial tuple that already fires is
/// charged its full probability mass and not extended.
pub fn cons_reject_exact(
    inst: &CspInstance,
    states: &[ColoringState],
    mode: EdgeMode,
    caps: ExactCaps,
) -> Result<f64> {
    if states.len() < 2 {
        return Err(Error::contract("Cons needs at least two provers"));
    }
    check_shapes(states)?;
    check_instance(inst, &states[0])?;
    caps.check(inst.n_vertices(), inst.alphabet_size(), states.len())?;
    let inst = inst.for_mode(mode);
    let supports: Vec<Vec<(usize, usize, f64)>> = states
        .iter()
        .map(|s| crate::state::distribution(s).support().collect())
        .collect();
    let mut chosen = Vec::with_capacity(states.len());
    let reject = enumerate(&inst, mode, &supports, &mut chosen, 1.0);
    Ok(reject.clamp(0.0, 1.0))
}

fn enumerate(
    inst: &CspInstance,
    mode: EdgeMode,
    supports: &[Vec<(usize, usize, f64)>],
    chosen: &mut Vec<(usize, usize)>,
    mass: f64,
) -> f64 {
    let depth = chosen.len();
    if depth == supports.len() {
        return 0.0;
    }
    let mut reject = 0.0;
    for &(v, j, p) in &supports[depth] {
        let m = mass * p;
        if chosen.iter().any(|&(va, ja)| pair_fires(inst, mode, va, ja, v, j)) {
            reject += m;
        } else {
            chosen.push((v, j));
            reject += enumerate(inst, mode, supports, chosen, m);
            chosen.pop();
        }
    }
    reject
}

pub(crate) fn check_instance(inst: &CspInstance, s: &ColoringState) -> Result<()> {
    if inst.n_vertices() != s.n() || inst.alphabet_size() != s.k() {
        return Err(Error::dim(format!(
            "instance is ({}, {}) but proofs are ({}, {})",
            inst.n_vertices(),
            inst.alphabet_size(),
            s.n(),
            s.k()
        )));
    }
    Ok(())
}

/// Two-prover Cons rejection split into its clauses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsBreakdown {
    /// REJ(ColCons): same vertex, different colors.
    pub col: f64,
    /// REJ(EdgeCons): some listed edge between the outcomes is violated.
    pub edge: f64,
    /// Probability that both clauses fire (only possible on self-loops).
    pub both: f64,
    /// REJ(Cons) = col + edge - both.
    pub total: f64,
}

/// Closed-form two-prover Cons evaluation, linear in `N K² + M K²`.
pub fn cons_reject_two(
    inst: &CspInstance,
    s1: &ColoringState,
    s2: &ColoringState,
    mode: EdgeMode,
) -> Result<ConsBreakdown> {
    s1.same_shape(s2)?;
    check_instance(inst, s1)?;
    let inst = inst.for_mode(mode);
    let k = s1.k();
    let d1 = crate::state::distribution(s1);
    let d2 = crate::state::distribution(s2);
    Ok(cons_two_from_dists(&inst, mode, k, &d1, &d2))
}

pub(crate) fn cons_two_from_dists(
    inst: &CspInstance,
    mode: EdgeMode,
    k: usize,
    d1: &OutcomeDistribution,
    d2: &OutcomeDistribution,
) -> ConsBreakdown {
    let n = d1.n();
    // Σ_v Σ_j Σ_{j'≠j} |α¹_v β¹_{v,j}|² |α²_v β²_{v,j'}|²
    let mut col = 0.0;
    for v in 0..n {
        for j in 0..k {
            let a = d1.get(v, j);
            if a == 0.0 {
                continue;
            }
            for jp in 0..k {
                if jp != j {
                    col += a * d2.get(v, jp);
                }
            }
        }
    }
    // ordered vertex pairs (v1, v2) on which the edge clause can fire
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(2 * inst.n_edges());
    for e in inst.edges() {
        pairs.push((e.u, e.v));
        if mode != EdgeMode::ProverOrdered && e.u != e.v {
            pairs.push((e.v, e.u));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let mut edge = 0.0;
    let mut both = 0.0;
    for &(v1, v2) in &pairs {
        for j1 in 0..k {
            let a = d1.get(v1, j1);
            if a == 0.0 {
                continue;
            }
            for j2 in 0..k {
                if edge_clause(inst, mode, v1, j1, v2, j2) {
                    let p = a * d2.get(v2, j2);
                    edge += p;
                    if color_clause(v1, j1, v2, j2) {
                        both += p;
                    }
                }
            }
        }
    }
    ConsBreakdown {
        col,
        edge,
        both,
        total: (col + edge - both).clamp(0.0, 1.0),
    }
}
