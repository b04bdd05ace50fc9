//! Numerical checkers for the lemmas on graph coloring states and the
//! two-prover lemma chain.

use serde::Serialize;

use super::constants::{bt09_constants, to_f64, Bt09Constants};
use crate::csp::{CspInstance, EdgeMode};
use crate::state::{
    apply_fourier, color_marginal_after_fourier, distribution, large_amplitude_set, measure_distribution,
    statistical_distance, swap_reject_prob, ColoringState, Dft, ReducedState, C64,
};
use crate::verifier::{cons_reject_two, unif_reject_exact};
use crate::{Coloring, Result};

/// Slack on conclusions, absorbing floating-point rounding.
pub const CONCLUSION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Some premise fails, so the implication says nothing.
    Vacuous,
    Confirmed,
    Violation,
}

impl Verdict {
    pub fn of(premise: bool, conclusion: bool) -> Self {
        match (premise, conclusion) {
            (false, _) => Verdict::Vacuous,
            (true, true) => Verdict::Confirmed,
            (true, false) => Verdict::Violation,
        }
    }

    pub fn is_violation(self) -> bool {
        self == Verdict::Violation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Computational,
    FourierVertex,
    FourierColor,
    FourierBoth,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::Computational, Basis::FourierVertex, Basis::FourierColor, Basis::FourierBoth];

    fn flags(self) -> (bool, bool) {
        match self {
            Basis::Computational => (false, false),
            Basis::FourierVertex => (true, false),
            Basis::FourierColor => (false, true),
            Basis::FourierBoth => (true, true),
        }
    }
}

/// Outcome distribution after the common unitary `basis`.
pub fn dstr(state: &ColoringState, basis: Basis) -> crate::OutcomeDistribution {
    match basis {
        Basis::Computational => distribution(state),
        _ => {
            let (v, c) = basis.flags();
            measure_distribution(&apply_fourier(state, v, c))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwapContraction {
    pub swap_reject: f64,
    pub distance: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Statistical distance of the two outcome distributions versus `√(2 REJ(Swap))`.
pub fn check_swap_contraction(s1: &ColoringState, s2: &ColoringState, basis: Basis) -> Result<SwapContraction> {
    let rej = swap_reject_prob(s1, s2)?;
    let distance = statistical_distance(&dstr(s1, basis), &dstr(s2, basis))?;
    let bound = (2.0 * rej).sqrt();
    Ok(SwapContraction {
        swap_reject: rej,
        distance,
        bound,
        holds: distance <= bound + 1e-9,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenUniformity {
    pub p_j: f64,
    pub alpha_sq: f64,
    pub gamma_sq: Option<f64>,
    pub bound: f64,
    pub verdict: Verdict,
}

/// `p_j ≥ 1/c₁ ∧ |α_v|² < 1/(c₂N)  ⟹  |γ_v(j)|² < c₁/(c₂N)`.
pub fn check_gen_uniformity(state: &ColoringState, v: usize, j: usize, c1: f64, c2: f64) -> GenUniformity {
    let n = state.n() as f64;
    let m = color_marginal_after_fourier(state);
    let p_j = m.p[j];
    let alpha_sq = state.alpha(v).norm_sqr();
    let premise = p_j >= 1.0 / c1 && alpha_sq < 1.0 / (c2 * n);
    let gamma_sq = match &m.gammas[j] {
        ReducedState::Defined(g) => Some(g[v].norm_sqr()),
        ReducedState::Undefined => None,
    };
    let bound = c1 / (c2 * n);
    // an undefined reduced state only arises when p_j = 0, which fails the premise
    let conclusion = gamma_sq.is_some_and(|g| g < bound + CONCLUSION_SLACK);
    GenUniformity {
        p_j,
        alpha_sq,
        gamma_sq,
        bound,
        verdict: Verdict::of(premise, conclusion),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexFourier {
    /// `|⟨γ|F_N^†|v⟩|²` for every `v`.
    pub probs: Vec<f64>,
    pub bound: f64,
    pub holds: bool,
}

/// Every outcome of `F_N|γ⟩` has probability at most
/// `1 - ¼ (Σ_w ||γ_w|² - 1/N|)²`.
pub fn check_vertex_and_fourier(gamma: &[C64]) -> Result<VertexFourier> {
    let n = gamma.len();
    let f = Dft::new(n)?;
    let probs: Vec<f64> = f.apply(gamma).iter().map(|a| a.norm_sqr()).collect();
    let dev: f64 = gamma.iter().map(|g| (g.norm_sqr() - 1.0 / n as f64).abs()).sum();
    let bound = 1.0 - 0.25 * dev * dev;
    let holds = probs.iter().all(|&p| p <= bound + 1e-9);
    Ok(VertexFourier { probs, bound, holds })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Premise {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

impl Premise {
    fn at_most(name: &'static str, value: f64, bound: f64) -> Self {
        Premise {
            name,
            value,
            bound,
            holds: value <= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Implication {
    pub premises: Vec<Premise>,
    pub premise_holds: bool,
    pub conclusion_holds: bool,
    pub verdict: Verdict,
    pub detail: String,
}

impl Implication {
    fn new(premises: Vec<Premise>, conclusion_holds: bool, detail: String) -> Self {
        let premise_holds = premises.iter().all(|p| p.holds);
        Implication {
            verdict: Verdict::of(premise_holds, conclusion_holds),
            premises,
            premise_holds,
            conclusion_holds,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaChainReport {
    pub constants: Bt09Constants,
    pub swap_reject: f64,
    pub col_cons_reject: f64,
    /// REJ(EdgeCons) counting only prover 1 on the tail and prover 2 on the
    /// head of a violated edge; the smallest of the edge modes.
    pub edge_cons_reject: f64,
    pub unif_reject: [f64; 2],
    /// Every heavy-amplitude vertex has a dominant color, for each prover.
    pub unique_coloring: [Implication; 2],
    /// Every Fourier color has `p_j ≥ 1/(4K)`, for each prover.
    pub color_often: [Implication; 2],
    /// Every vertex has `|α_v|² ≥ 1/(8KN)`, for each prover.
    pub all_vertices: [Implication; 2],
    /// The argmax coloring of prover 1 and the edges it violates.
    pub extracted: Coloring,
    pub violated_edges: usize,
    /// REJ(EdgeCons) exceeds `(100K-1)²/(800²K⁴N²)` once all premises hold and
    /// the extracted coloring violates some edge.
    pub edge_floor: Implication,
}

impl LemmaChainReport {
    pub fn implications(&self) -> impl Iterator<Item = &Implication> {
        self.unique_coloring
            .iter()
            .chain(&self.color_often)
            .chain(&self.all_vertices)
            .chain(std::iter::once(&self.edge_floor))
    }

    pub fn any_violation(&self) -> bool {
        self.implications().any(|i| i.verdict.is_violation())
    }
}

fn unique_coloring(state: &ColoringState, c: &Bt09Constants, premises: Vec<Premise>) -> Result<Implication> {
    let heavy = c.heavy_color_mass();
    let s = large_amplitude_set(state, 1.0 / (8.0 * state.n() as f64))?;
    let mut bad = Vec::new();
    for &v in &s {
        let best = state.beta_row(v).iter().map(|b| b.norm_sqr()).fold(0.0, f64::max);
        if best < heavy - CONCLUSION_SLACK {
            bad.push(v);
        }
    }
    let detail = if bad.is_empty() {
        format!("{} heavy vertices all carry a color of mass ≥ {heavy}", s.len())
    } else {
        format!("vertices without a dominant color: {bad:?}")
    };
    Ok(Implication::new(premises, bad.is_empty(), detail))
}

fn color_often(state: &ColoringState, premises: Vec<Premise>) -> Implication {
    let k = state.k() as f64;
    let p = color_marginal_after_fourier(state).p;
    let min = p.iter().copied().fold(f64::INFINITY, f64::min);
    let holds = min >= 1.0 / (4.0 * k) - CONCLUSION_SLACK;
    Implication::new(premises, holds, format!("min p_j = {min}, bound {}", 1.0 / (4.0 * k)))
}

fn all_vertices(state: &ColoringState, premises: Vec<Premise>) -> Implication {
    let bound = 1.0 / (8.0 * (state.k() * state.n()) as f64);
    let min = state.alphas().iter().map(|a| a.norm_sqr()).fold(f64::INFINITY, f64::min);
    let holds = min >= bound - CONCLUSION_SLACK;
    Implication::new(premises, holds, format!("min |α_v|² = {min}, bound {bound}"))
}

/// Evaluates the premises of each lemma on the pair and checks its conclusion.
pub fn check_bt09_lemma_chain(inst: &CspInstance, s1: &ColoringState, s2: &ColoringState) -> Result<LemmaChainReport> {
    let c = bt09_constants(s1.n() as u64, s1.k() as u64)?;
    let swap = swap_reject_prob(s1, s2)?;
    let cons = cons_reject_two(inst, s1, s2, EdgeMode::ProverOrdered)?;
    let u = [unif_reject_exact(s1), unif_reject_exact(s2)];
    let p_swap = Premise::at_most("REJ(Swap) <= delta", swap, c.delta_f64());
    let p_col = Premise::at_most("REJ(ColCons) <= mu", cons.col, c.mu_f64());
    let p_unif = |i: usize| Premise::at_most("REJ(Unif) <= nu", u[i], c.nu_f64());
    let base = || vec![p_swap.clone(), p_col.clone()];

    let unique = [unique_coloring(s1, &c, base())?, unique_coloring(s2, &c, base())?];
    let often = [color_often(s1, base()), color_often(s2, base())];
    let verts = [
        all_vertices(s1, [base(), vec![p_unif(0)]].concat()),
        all_vertices(s2, [base(), vec![p_unif(1)]].concat()),
    ];

    let extracted = s1.argmax_coloring();
    let violated = inst.violated_edges(&extracted)?.len();
    let floor = to_f64(&c.edge_cons_floor());
    let mut premises = [base(), vec![p_unif(0), p_unif(1)]].concat();
    premises.push(Premise {
        name: "extracted coloring violates an edge",
        value: violated as f64,
        bound: 1.0,
        holds: violated >= 1,
    });
    let edge_floor = Implication::new(
        premises,
        cons.edge >= floor - CONCLUSION_SLACK,
        format!("REJ(EdgeCons) = {}, floor {floor}", cons.edge),
    );
    Ok(LemmaChainReport {
        constants: c,
        swap_reject: swap,
        col_cons_reject: cons.col,
        edge_cons_reject: cons.edge,
        unif_reject: u,
        unique_coloring: unique,
        color_often: often,
        all_vertices: verts,
        extracted,
        violated_edges: violated,
        edge_floor,
    })
}
