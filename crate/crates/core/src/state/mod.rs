//! Graph coloring states `Σ_v α_v |v⟩ Σ_j β_{v,j} |j⟩` and the primitives the
//! verifiers measure them with.

mod dft;
mod random;

pub use dft::{dft, Dft};
pub use random::{random_state, StateProfile};
pub(crate) use random::random_state_with;

use num_complex::Complex64;

use crate::csp::{Coloring, CspInstance};
use crate::{Error, Result, NORM_TOLERANCE};

pub type C64 = Complex64;

fn norm_sqr(xs: &[C64]) -> f64 {
    xs.iter().map(|a| a.norm_sqr()).sum()
}

/// A product state over a vertex register (dimension `N`) and a color register
/// (dimension `K`) whose color amplitudes may depend on the vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoringState {
    n: usize,
    k: usize,
    vertex_amp: Vec<C64>,
    // row-major N x K
    color_amp: Vec<C64>,
}

impl ColoringState {
    /// Validates `Σ|α_v|² = 1` and `Σ_j |β_{v,j}|² = 1` for every `v`.
    pub fn new(vertex_amp: Vec<C64>, color_amp: Vec<Vec<C64>>) -> Result<Self> {
        let n = vertex_amp.len();
        if n == 0 || color_amp.len() != n {
            return Err(Error::dim(format!(
                "{} vertex amplitudes but {} color rows",
                n,
                color_amp.len()
            )));
        }
        let k = color_amp[0].len();
        if k == 0 {
            return Err(Error::dim("empty color register"));
        }
        let mut flat = Vec::with_capacity(n * k);
        for (v, row) in color_amp.iter().enumerate() {
            if row.len() != k {
                return Err(Error::dim(format!("color row {v} has {} entries, expected {k}", row.len())));
            }
            flat.extend_from_slice(row);
        }
        let s = ColoringState {
            n,
            k,
            vertex_amp,
            color_amp: flat,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let a = norm_sqr(&self.vertex_amp);
        if (a - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("vertex register norm² is {a}")));
        }
        for v in 0..self.n {
            let b = norm_sqr(self.beta_row(v));
            if (b - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::InvalidState(format!("color register of vertex {v} has norm² {b}")));
            }
        }
        if self.vertex_amp.iter().chain(&self.color_amp).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        Ok(())
    }

    /// Rescales every register to unit norm: the projection onto the product
    /// of unit spheres. A zero color row becomes `|0⟩`; a zero vertex register
    /// becomes `|0⟩`.
    pub fn normalized(n: usize, k: usize, mut vertex_amp: Vec<C64>, mut color_amp: Vec<C64>) -> Self {
        assert_eq!(vertex_amp.len(), n);
        assert_eq!(color_amp.len(), n * k);
        normalize_in_place(&mut vertex_amp);
        for row in color_amp.chunks_mut(k) {
            normalize_in_place(row);
        }
        ColoringState {
            n,
            k,
            vertex_amp,
            color_amp,
        }
    }

    /// The honest encoding `(1/√N) Σ_v |v⟩|χ(v)⟩` of a coloring.
    pub fn from_coloring(inst: &CspInstance, col: &Coloring) -> Result<Self> {
        inst.check_coloring(col)?;
        Ok(Self::honest(inst.alphabet_size(), col))
    }

    pub(crate) fn honest(k: usize, col: &Coloring) -> Self {
        let n = col.len();
        let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        let mut color_amp = vec![C64::new(0.0, 0.0); n * k];
        for (v, &c) in col.colors().iter().enumerate() {
            color_amp[v * k + c] = C64::new(1.0, 0.0);
        }
        ColoringState {
            n,
            k,
            vertex_amp: vec![a; n],
            color_amp,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self, v: usize) -> C64 {
        self.vertex_amp[v]
    }

    pub fn alphas(&self) -> &[C64] {
        &self.vertex_amp
    }

    pub fn beta(&self, v: usize, j: usize) -> C64 {
        self.color_amp[v * self.k + j]
    }

    pub fn beta_row(&self, v: usize) -> &[C64] {
        &self.color_amp[v * self.k..(v + 1) * self.k]
    }

    pub(crate) fn betas_flat(&self) -> &[C64] {
        &self.color_amp
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::dim(format!(
                "state shapes ({}, {}) and ({}, {}) differ",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    /// `ψ_{v,j} = α_v β_{v,j}`.
    pub fn joint(&self) -> JointAmplitude {
        let mut amp = Vec::with_capacity(self.n * self.k);
        for v in 0..self.n {
            let a = self.vertex_amp[v];
            amp.extend(self.beta_row(v).iter().map(|b| a * b));
        }
        JointAmplitude {
            n: self.n,
            k: self.k,
            amp,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same_shape(other)?;
        let mut acc = C64::new(0.0, 0.0);
        for v in 0..self.n {
            let row: C64 = self
                .beta_row(v)
                .iter()
                .zip(other.beta_row(v))
                .map(|(a, b)| a.conj() * b)
                .sum();
            acc += self.vertex_amp[v].conj() * other.vertex_amp[v] * row;
        }
        Ok(acc)
    }

    /// Probability of computational-basis outcome `(v, j)`.
    #[inline]
    pub fn outcome_prob(&self, v: usize, j: usize) -> f64 {
        (self.vertex_amp[v] * self.color_amp[v * self.k + j]).norm_sqr()
    }

    /// Amplitudes of color 0 after `I ⊗ F_K`:
    /// `w_v = α_v Σ_j β_{v,j} / √K`.
    pub fn fourier_zero_color(&self) -> Vec<C64> {
        let s = 1.0 / (self.k as f64).sqrt();
        (0..self.n)
            .map(|v| self.vertex_amp[v] * self.beta_row(v).iter().sum::<C64>() * s)
            .collect()
    }

    /// Extracted coloring `argmax_j |β_{v,j}|²`, ties to the lowest color.
    pub fn argmax_coloring(&self) -> Coloring {
        Coloring(
            (0..self.n)
                .map(|v| {
                    let row = self.beta_row(v);
                    let mut best = 0;
                    for j in 1..self.k {
                        if row[j].norm_sqr() > row[best].norm_sqr() {
                            best = j;
                        }
                    }
                    best
                })
                .collect(),
        )
    }
}

fn normalize_in_place(xs: &mut [C64]) {
    let nrm = norm_sqr(xs).sqrt();
    if nrm > 0.0 && nrm.is_finite() {
        for x in xs.iter_mut() {
            *x /= nrm;
        }
    } else {
        for x in xs.iter_mut() {
            *x = C64::new(0.0, 0.0);
        }
        xs[0] = C64::new(1.0, 0.0);
    }
}

/// A general state on the `N x K` register pair, which need not factor.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitude {
    n: usize,
    k: usize,
    amp: Vec<C64>,
}

impl JointAmplitude {
    pub fn new(n: usize, k: usize, amp: Vec<C64>) -> Result<Self> {
        if amp.len() != n * k || n == 0 || k == 0 {
            return Err(Error::dim(format!("{} amplitudes for a {n}x{k} register", amp.len())));
        }
        let s = norm_sqr(&amp);
        if (s - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("joint amplitude norm² is {s}")));
        }
        Ok(JointAmplitude { n, k, amp })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, v: usize, j: usize) -> C64 {
        self.amp[v * self.k + j]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amp)
    }

    fn apply_vertex(&mut self, f: &Dft) {
        let mut out = vec![C64::new(0.0, 0.0); self.amp.len()];
        for (r, row) in f.rows().enumerate() {
            for (v, &w) in row.iter().enumerate() {
                for j in 0..self.k {
                    out[r * self.k + j] += w * self.amp[v * self.k + j];
                }
            }
        }
        self.amp = out;
    }

    fn apply_color(&mut self, f: &Dft) {
        for row in self.amp.chunks_mut(self.k) {
            let y = f.apply(row);
            row.copy_from_slice(&y);
        }
    }
}

/// Applies `F_N` to the vertex register iff `on_vertex` and `F_K` to the color
/// register iff `on_color`.
pub fn apply_fourier(state: &ColoringState, on_vertex: bool, on_color: bool) -> JointAmplitude {
    let mut j = state.joint();
    if on_color {
        j.apply_color(&Dft::new(state.k).expect("k > 0"));
    }
    if on_vertex {
        j.apply_vertex(&Dft::new(state.n).expect("n > 0"));
    }
    j
}

/// Outcome probabilities over `(vertex, color)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    n: usize,
    k: usize,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(n: usize, k: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n * k || n == 0 || k == 0 {
            return Err(Error::dim(format!("{} probabilities for a {n}x{k} grid", probs.len())));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidState("negative or NaN probability".into()));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("probabilities sum to {s}")));
        }
        Ok(OutcomeDistribution { n, k, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, v: usize, j: usize) -> f64 {
        self.probs[v * self.k + j]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Flat index `v * K + j` to `(v, j)`.
    pub fn outcome(&self, idx: usize) -> (usize, usize) {
        (idx / self.k, idx % self.k)
    }

    /// Outcomes with nonzero probability.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, &p)| (i / self.k, i % self.k, p))
    }
}

/// Computational-basis measurement of both registers.
pub fn measure_distribution(joint: &JointAmplitude) -> OutcomeDistribution {
    OutcomeDistribution {
        n: joint.n,
        k: joint.k,
        probs: joint.amp.iter().map(|a| a.norm_sqr()).collect(),
    }
}

/// `dstr` of a coloring state in the computational basis.
pub fn distribution(state: &ColoringState) -> OutcomeDistribution {
    let mut probs = Vec::with_capacity(state.n * state.k);
    for v in 0..state.n {
        for j in 0..state.k {
            probs.push(state.outcome_prob(v, j));
        }
    }
    OutcomeDistribution {
        n: state.n,
        k: state.k,
        probs,
    }
}

/// `(1 - |⟨φ|ψ⟩|²) / 2`.
pub fn swap_reject_prob(s1: &ColoringState, s2: &ColoringState) -> Result<f64> {
    let o = s1.inner(s2)?.norm_sqr();
    Ok(((1.0 - o) / 2.0).clamp(0.0, 0.5))
}

pub fn statistical_distance(p: &OutcomeDistribution, q: &OutcomeDistribution) -> Result<f64> {
    if p.n != q.n || p.k != q.k {
        return Err(Error::dim(format!(
            "distribution shapes ({}, {}) and ({}, {}) differ",
            p.n, p.k, q.n, q.k
        )));
    }
    Ok(0.5 * p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Trace distance between two pure states, `√(1 - |⟨φ|ψ⟩|²)`.
pub fn pure_trace_distance(s1: &ColoringState, s2: &ColoringState) -> Result<f64> {
    let o = s1.inner(s2)?.norm_sqr();
    Ok((1.0 - o).max(0.0).sqrt())
}

/// The vertex state left after measuring color `j` of `(I ⊗ F_K)|Ψ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub enum ReducedState {
    Defined(Vec<C64>),
    /// Color `j` has probability zero, so no post-measurement state exists.
    Undefined,
}

impl ReducedState {
    pub fn amplitudes(&self) -> Option<&[C64]> {
        match self {
            ReducedState::Defined(v) => Some(v),
            ReducedState::Undefined => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ColorMarginal {
    /// `p_j`: probability of color `j` after `I ⊗ F_K`.
    pub p: Vec<f64>,
    /// `|γ(j)⟩` for each color.
    pub gammas: Vec<ReducedState>,
}

pub fn color_marginal_after_fourier(state: &ColoringState) -> ColorMarginal {
    let x = apply_fourier(state, false, true);
    let mut p = vec![0.0; state.k];
    let mut gammas = Vec::with_capacity(state.k);
    for (j, pj) in p.iter_mut().enumerate() {
        let col: Vec<C64> = (0..state.n).map(|v| x.get(v, j)).collect();
        let mass = norm_sqr(&col);
        *pj = mass;
        if mass > 0.0 {
            let s = mass.sqrt();
            gammas.push(ReducedState::Defined(col.into_iter().map(|a| a / s).collect()));
        } else {
            gammas.push(ReducedState::Undefined);
        }
    }
    ColorMarginal { p, gammas }
}

/// `R_c`: vertices with `|α_v|² < c`.
pub fn small_amplitude_set(state: &ColoringState, c: f64) -> Result<Vec<usize>> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::contract(format!("threshold {c} outside (0, 1]")));
    }
    Ok((0..state.n).filter(|&v| state.vertex_amp[v].norm_sqr() < c).collect())
}

/// `S_c = V - R_c`.
pub fn large_amplitude_set(state: &ColoringState, c: f64) -> Result<Vec<usize>> {
    let small = small_amplitude_set(state, c)?;
    Ok((0..state.n).filter(|v| small.binary_search(v).is_err()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::DirectedEdge;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn inst(n: usize, k: usize) -> CspInstance {
        CspInstance::new("empty", n, k, Vec::<DirectedEdge>::new()).unwrap()
    }

    #[test]
    fn honest_two_vertices() {
        let s = ColoringState::from_coloring(&inst(2, 2), &Coloring(vec![0, 1])).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(s.alpha(0).re, h);
        assert_abs_diff_eq!(s.alpha(1).re, h);
        assert_eq!(s.beta_row(0), &[c(1.0), c(0.0)]);
        assert_eq!(s.beta_row(1), &[c(0.0), c(1.0)]);
        assert!(s.validate().is_ok());
    }

    #[test]
    fn honest_single_vertex() {
        let s = ColoringState::from_coloring(&inst(1, 3), &Coloring(vec![2])).unwrap();
        assert_eq!(s.alpha(0), c(1.0));
    }

    #[test]
    fn constructor_checks_norms() {
        assert!(ColoringState::new(vec![c(1.0), c(1.0)], vec![vec![c(1.0)], vec![c(1.0)]]).is_err());
        assert!(ColoringState::new(vec![c(1.0), c(0.0)], vec![vec![c(1.0)], vec![c(0.5)]]).is_err());
        assert!(ColoringState::new(vec![c(1.0)], vec![vec![c(1.0)], vec![c(1.0)]]).is_err());
    }

    #[test]
    fn identity_fourier_is_joint() {
        let s = random_state(4, 3, 5, &StateProfile::Haar).unwrap();
        let j = apply_fourier(&s, false, false);
        for v in 0..4 {
            for c in 0..3 {
                assert_eq!(j.get(v, c), s.alpha(v) * s.beta(v, c));
            }
        }
    }

    #[test]
    fn honest_zero_color_mass_sits_on_vertex_zero() {
        let col = Coloring(vec![0, 2, 1, 1, 0]);
        let s = ColoringState::honest(3, &col);
        let x = apply_fourier(&s, true, true);
        // direct matrix computation of the color-0 column
        let fk = Dft::new(3).unwrap();
        let fnn = Dft::new(5).unwrap();
        let mut col0 = vec![C64::new(0.0, 0.0); 5];
        for (r, out) in col0.iter_mut().enumerate() {
            for v in 0..5 {
                for j in 0..3 {
                    *out += fnn.entry(r, v) * fk.entry(0, j) * s.alpha(v) * s.beta(v, j);
                }
            }
        }
        for v in 0..5 {
            assert!((x.get(v, 0) - col0[v]).norm() < 1e-12);
        }
        assert_abs_diff_eq!(x.get(0, 0).norm_sqr(), 1.0 / 3.0, epsilon = 1e-12);
        for v in 1..5 {
            assert!(x.get(v, 0).norm_sqr() < 1e-24);
        }
    }

    #[test]
    fn fourier_preserves_norm() {
        for seed in 0..1000 {
            let n = 1 + (seed as usize % 7);
            let k = 1 + (seed as usize % 4);
            let s = random_state(n, k, seed, &StateProfile::Haar).unwrap();
            for (a, b) in [(true, true), (true, false), (false, true)] {
                assert!((apply_fourier(&s, a, b).norm_sqr() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn honest_distribution() {
        let col = Coloring(vec![1, 0, 1]);
        let s = ColoringState::honest(2, &col);
        let d = measure_distribution(&s.joint());
        for v in 0..3 {
            assert_abs_diff_eq!(d.get(v, col.color(v)), 1.0 / 3.0, epsilon = 1e-15);
            assert_abs_diff_eq!(d.get(v, 1 - col.color(v)), 0.0);
        }
    }

    #[test]
    fn point_mass_distribution() {
        let mut amp = vec![c(0.0); 6];
        amp[4] = C64::new(0.0, 1.0);
        let j = JointAmplitude::new(3, 2, amp).unwrap();
        let d = measure_distribution(&j);
        assert_eq!(d.probs(), &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn distributions_sum_to_one() {
        for seed in 0..200 {
            let s = random_state(5, 3, seed, &StateProfile::Haar).unwrap();
            for (a, b) in [(false, false), (true, true)] {
                let d = measure_distribution(&apply_fourier(&s, a, b));
                assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn swap_examples() {
        let s = random_state(3, 2, 1, &StateProfile::Haar).unwrap();
        assert_abs_diff_eq!(swap_reject_prob(&s, &s).unwrap(), 0.0, epsilon = 1e-15);
        let a = ColoringState::new(vec![c(1.0), c(0.0)], vec![vec![c(1.0)], vec![c(1.0)]]).unwrap();
        let b = ColoringState::new(vec![c(0.0), c(1.0)], vec![vec![c(1.0)], vec![c(1.0)]]).unwrap();
        assert_abs_diff_eq!(swap_reject_prob(&a, &b).unwrap(), 0.5);
        let h = 1.0 / 2f64.sqrt();
        let d = ColoringState::new(vec![c(h), c(h)], vec![vec![c(1.0)], vec![c(1.0)]]).unwrap();
        // |<a|d>|^2 = 1/2
        assert_abs_diff_eq!(swap_reject_prob(&a, &d).unwrap(), 0.25, epsilon = 1e-15);
        let big = random_state(4, 2, 1, &StateProfile::Haar).unwrap();
        assert!(swap_reject_prob(&s, &big).is_err());
    }

    #[test]
    fn statistical_distance_examples() {
        let p = OutcomeDistribution::new(2, 1, vec![1.0, 0.0]).unwrap();
        let q = OutcomeDistribution::new(2, 1, vec![0.5, 0.5]).unwrap();
        let r = OutcomeDistribution::new(2, 1, vec![0.0, 1.0]).unwrap();
        assert_eq!(statistical_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(statistical_distance(&p, &r).unwrap(), 1.0);
        assert_eq!(statistical_distance(&p, &q).unwrap(), 0.5);
        let w = OutcomeDistribution::new(1, 2, vec![0.5, 0.5]).unwrap();
        assert!(statistical_distance(&p, &w).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let a = ColoringState::new(vec![c(1.0), c(0.0)], vec![vec![c(1.0)], vec![c(1.0)]]).unwrap();
        let b = ColoringState::new(vec![c(0.0), c(1.0)], vec![vec![c(1.0)], vec![c(1.0)]]).unwrap();
        assert_eq!(pure_trace_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(pure_trace_distance(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn honest_color_marginal_is_uniform() {
        let col = Coloring(vec![0, 2, 1, 1]);
        let s = ColoringState::honest(3, &col);
        let m = color_marginal_after_fourier(&s);
        for j in 0..3 {
            assert_abs_diff_eq!(m.p[j], 1.0 / 3.0, epsilon = 1e-12);
            let g = m.gammas[j].amplitudes().unwrap();
            for a in g {
                assert_abs_diff_eq!(a.norm_sqr(), 0.25, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_probability_color_is_undefined() {
        // β = (1, -1)/√2 has F_2 image |1⟩; row 0 of F_2 is exact so p_0 is 0
        let h = 1.0 / 2f64.sqrt();
        let s = ColoringState::new(vec![c(1.0)], vec![vec![c(h), c(-h)]]).unwrap();
        let m = color_marginal_after_fourier(&s);
        assert_eq!(m.p[0], 0.0);
        assert_eq!(m.gammas[0], ReducedState::Undefined);
        assert!(matches!(m.gammas[1], ReducedState::Defined(_)));
    }

    #[test]
    fn color_marginal_sums_to_one() {
        for seed in 0..100 {
            let s = random_state(4, 5, seed, &StateProfile::Haar).unwrap();
            let m = color_marginal_after_fourier(&s);
            assert!((m.p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn small_amplitude_sets() {
        let n = 6;
        let s = ColoringState::honest(2, &Coloring(vec![0; n]));
        assert!(small_amplitude_set(&s, 1.0 / (2.0 * n as f64)).unwrap().is_empty());
        assert_eq!(small_amplitude_set(&s, 2.0 / n as f64).unwrap(), (0..n).collect::<Vec<_>>());
        let mut alpha = vec![c(0.0); n];
        alpha[0] = c(1.0);
        let p = ColoringState::new(alpha, vec![vec![c(1.0), c(0.0)]; n]).unwrap();
        assert_eq!(
            small_amplitude_set(&p, 1.0 / (8.0 * n as f64)).unwrap(),
            (1..n).collect::<Vec<_>>()
        );
        assert_eq!(large_amplitude_set(&p, 1.0 / (8.0 * n as f64)).unwrap(), vec![0]);
        assert!(small_amplitude_set(&p, 0.0).is_err());
        assert!(small_amplitude_set(&p, 1.5).is_err());
    }

    #[test]
    fn fast_zero_color_matches_fourier() {
        for seed in 0..50 {
            let s = random_state(5, 4, seed, &StateProfile::Haar).unwrap();
            let w = s.fourier_zero_color();
            let x = apply_fourier(&s, false, true);
            for v in 0..5 {
                assert!((w[v] - x.get(v, 0)).norm() < 1e-12);
            }
        }
    }
}
