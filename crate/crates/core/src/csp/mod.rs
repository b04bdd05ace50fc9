//! Graph constraint satisfaction instances over a `K`-letter alphabet.

mod generate;
mod oracle;

pub use generate::{
    generate_one_bad_edge, generate_one_bad_edge_with, generate_regular_gap_instance,
    BadEdgeShape, GapInstance, GapMode,
};
pub use oracle::{local_search, max_satisfiable_fraction, Oracle, OracleBest};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How the consistency test reads the edge list when comparing two provers'
/// outcomes `(v_i, j_i)` and `(v_{i'}, j_{i'})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeMode {
    /// Every ordered pair of distinct provers `(i, i')` is checked against the
    /// directed edge list exactly as stored.
    #[default]
    AsListed,
    /// As listed, after adding each edge's reverse with the transposed
    /// relation.
    Symmetrized,
    /// Only prover pairs with `i < i'` are checked, so an edge `(u, w)` fires
    /// only when the lower-indexed prover lands on `u`.
    ProverOrdered,
}

impl EdgeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeMode::AsListed => "as-listed",
            EdgeMode::Symmetrized => "symmetrized",
            EdgeMode::ProverOrdered => "prover-ordered",
        }
    }
}

impl std::str::FromStr for EdgeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-listed" => Ok(EdgeMode::AsListed),
            "symmetrized" => Ok(EdgeMode::Symmetrized),
            "prover-ordered" => Ok(EdgeMode::ProverOrdered),
            other => Err(Error::contract(format!("unknown edge mode {other:?}"))),
        }
    }
}

/// One directed constraint `R_(u,v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedEdge {
    pub u: usize,
    pub v: usize,
    k: usize,
    allowed: Vec<bool>,
}

impl DirectedEdge {
    /// `allowed[a][b]` is the predicate value on colors `(a, b)`.
    pub fn new(u: usize, v: usize, allowed: Vec<Vec<bool>>) -> Result<Self> {
        let k = allowed.len();
        if k == 0 {
            return Err(Error::contract("relation table has no rows"));
        }
        let mut flat = Vec::with_capacity(k * k);
        for (a, row) in allowed.iter().enumerate() {
            if row.len() != k {
                return Err(Error::contract(format!(
                    "relation row {a} has {} entries, expected {k}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        Ok(DirectedEdge {
            u,
            v,
            k,
            allowed: flat,
        })
    }

    pub(crate) fn from_fn(u: usize, v: usize, k: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut allowed = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                allowed.push(f(a, b));
            }
        }
        DirectedEdge { u, v, k, allowed }
    }

    #[inline]
    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.allowed[a * self.k + b]
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn is_self_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn table(&self) -> Vec<Vec<bool>> {
        self.allowed.chunks(self.k).map(|r| r.to_vec()).collect()
    }

    fn transposed(&self) -> Self {
        DirectedEdge::from_fn(self.v, self.u, self.k, |a, b| self.allows(b, a))
    }
}

/// A 2CSP `(G, {R_e})` with a directed edge list.
#[derive(Debug, Clone)]
pub struct CspInstance {
    name: String,
    n: usize,
    k: usize,
    edges: Vec<DirectedEdge>,
    // out[u] holds (v, edge index), sorted by v.
    out: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for CspInstance {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.n == other.n && self.k == other.k && self.edges == other.edges
    }
}

impl CspInstance {
    pub fn new(
        name: impl Into<String>,
        n_vertices: usize,
        alphabet_size: usize,
        edges: Vec<DirectedEdge>,
    ) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::contract("n_vertices must be positive"));
        }
        if alphabet_size == 0 {
            return Err(Error::contract("alphabet_size must be positive"));
        }
        let mut out = vec![Vec::new(); n_vertices];
        for (idx, e) in edges.iter().enumerate() {
            if e.u >= n_vertices || e.v >= n_vertices {
                return Err(Error::contract(format!(
                    "edge {idx} endpoint ({}, {}) out of range for {n_vertices} vertices",
                    e.u, e.v
                )));
            }
            if e.k != alphabet_size {
                return Err(Error::contract(format!(
                    "edge {idx} relation is {}x{}, expected {alphabet_size}x{alphabet_size}",
                    e.k, e.k
                )));
            }
            out[e.u].push((e.v, idx));
        }
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::contract(format!(
                    "duplicate edge ({u}, {}) at positions {} and {}",
                    w[0].0, w[0].1, w[1].1
                )));
            }
        }
        Ok(CspInstance {
            name: name.into(),
            n: n_vertices,
            k: alphabet_size,
            edges,
            out,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// The edge stored for the ordered pair `(u, v)`, if any.
    #[inline]
    pub fn edge(&self, u: usize, v: usize) -> Option<&DirectedEdge> {
        let list = &self.out[u];
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| &self.edges[list[i].1])
    }

    /// True when the ordered pair `(u, v)` is an edge whose relation rejects
    /// colors `(a, b)`.
    #[inline]
    pub fn violates(&self, u: usize, a: usize, v: usize, b: usize) -> bool {
        matches!(self.edge(u, v), Some(e) if !e.allows(a, b))
    }

    /// Adds every edge's reverse with the transposed relation. When the reverse
    /// pair is already present its relation is intersected with the transpose.
    pub fn symmetrized(&self) -> CspInstance {
        let mut edges = self.edges.clone();
        for e in &self.edges {
            if e.is_self_loop() {
                continue;
            }
            let t = e.transposed();
            match self.out[e.v].binary_search_by_key(&e.u, |&(w, _)| w) {
                Ok(i) => {
                    let idx = self.out[e.v][i].1;
                    let cur = edges[idx].clone();
                    edges[idx] =
                        DirectedEdge::from_fn(cur.u, cur.v, self.k, |a, b| cur.allows(a, b) && t.allows(a, b));
                }
                Err(_) => edges.push(t),
            }
        }
        CspInstance::new(format!("{}+sym", self.name), self.n, self.k, edges)
            .expect("symmetrization preserves validity")
    }

    /// The instance the consistency test actually reads under `mode`.
    pub fn for_mode(&self, mode: EdgeMode) -> std::borrow::Cow<'_, CspInstance> {
        match mode {
            EdgeMode::Symmetrized => std::borrow::Cow::Owned(self.symmetrized()),
            _ => std::borrow::Cow::Borrowed(self),
        }
    }

    pub fn check_coloring(&self, col: &Coloring) -> Result<()> {
        if col.len() != self.n {
            return Err(Error::contract(format!(
                "coloring has {} entries, instance has {} vertices",
                col.len(),
                self.n
            )));
        }
        if let Some((v, &c)) = col.0.iter().enumerate().find(|(_, &c)| c >= self.k) {
            return Err(Error::contract(format!(
                "vertex {v} has color {c}, alphabet size is {}",
                self.k
            )));
        }
        Ok(())
    }

    pub(crate) fn count_satisfied(&self, colors: &[usize]) -> u64 {
        self.edges
            .iter()
            .filter(|e| e.allows(colors[e.u], colors[e.v]))
            .count() as u64
    }

    /// Indices of the edges `col` violates.
    pub fn violated_edges(&self, col: &Coloring) -> Result<Vec<usize>> {
        self.check_coloring(col)?;
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.allows(col.0[e.u], col.0[e.v]))
            .map(|(i, _)| i)
            .collect())
    }
}

/// A labeling `V -> Σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring(pub Vec<usize>);

impl Coloring {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[usize] {
        &self.0
    }

    pub fn color(&self, v: usize) -> usize {
        self.0[v]
    }
}

/// Fraction of edge predicates satisfied by `col`. An instance without edges
/// is vacuously fully satisfied.
pub fn satisfied_fraction(inst: &CspInstance, col: &Coloring) -> Result<Ratio<u64>> {
    inst.check_coloring(col)?;
    let m = inst.n_edges() as u64;
    if m == 0 {
        return Ok(Ratio::from_integer(1));
    }
    Ok(Ratio::new(inst.count_satisfied(&col.0), m))
}
