//! Seeded instance generators.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{Coloring, CspInstance, DirectedEdge, Oracle};
use crate::rng::{self, Rng as StreamRng};
use crate::{Error, Result};

/// Where the single violated constraint of [`generate_one_bad_edge_with`] sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BadEdgeShape {
    /// The violated edge joins two distinct vertices.
    Distinct,
    /// The violated edge is a self-loop whose relation forbids equal colors.
    SelfLoop,
}

impl std::str::FromStr for BadEdgeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distinct" => Ok(BadEdgeShape::Distinct),
            "self-loop" => Ok(BadEdgeShape::SelfLoop),
            other => Err(Error::contract(format!("unknown bad-edge shape {other:?}"))),
        }
    }
}

fn random_perm(rng: &mut StreamRng, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.shuffle(rng);
    p
}

/// Random permutation of `0..k` sending `from` to `to`.
fn perm_through(rng: &mut StreamRng, k: usize, from: usize, to: usize) -> Vec<usize> {
    let mut p = random_perm(rng, k);
    let cur = p[from];
    if cur != to {
        let pos = p.iter().position(|&x| x == to).unwrap();
        p.swap(from, pos);
    }
    p
}

fn perm_edge(u: usize, v: usize, perm: &[usize]) -> DirectedEdge {
    DirectedEdge::from_fn(u, v, perm.len(), |a, b| perm[a] == b)
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (a, &b) in p.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

/// Unsatisfiable instance together with a coloring violating exactly one edge
/// (the distinct-endpoint shape).
pub fn generate_one_bad_edge(n: usize, k: usize, seed: u64) -> Result<(CspInstance, Coloring)> {
    generate_one_bad_edge_with(n, k, seed, BadEdgeShape::Distinct)
}

/// Builds a cycle of permutation constraints through all vertices in random
/// order. Every coloring satisfying all but the closing edge is determined by
/// the color of the first vertex, and the closing permutation composes to a
/// fixed-point-free shift, so no coloring satisfies the whole cycle. The
/// returned coloring satisfies every cycle edge except the closing one. A few
/// chord edges consistent with that coloring are added for texture.
///
/// With [`BadEdgeShape::SelfLoop`] the cycle is closed consistently and the
/// frustration is a self-loop forbidding equal colors instead.
pub fn generate_one_bad_edge_with(
    n: usize,
    k: usize,
    seed: u64,
    shape: BadEdgeShape,
) -> Result<(CspInstance, Coloring)> {
    if n < 2 {
        return Err(Error::contract(format!("need n >= 2, got {n}")));
    }
    if k < 2 {
        return Err(Error::contract(format!("need k >= 2, got {k}")));
    }
    let mut rng = rng::stream(seed, 0);
    let col: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut edges = Vec::with_capacity(n + n / 2 + 1);
    // tau: composition of the path permutations, color of order[0] -> order[i]
    let mut tau: Vec<usize> = (0..k).collect();
    for i in 0..n - 1 {
        let (a, b) = (order[i], order[i + 1]);
        let p = perm_through(&mut rng, k, col[a], col[b]);
        tau = tau.iter().map(|&c| p[c]).collect();
        edges.push(perm_edge(a, b, &p));
    }
    let tau_inv = invert(&tau);
    let (first, last) = (order[0], order[n - 1]);
    let closing: Vec<usize> = match shape {
        BadEdgeShape::Distinct => (0..k).map(|c| (tau_inv[c] + 1) % k).collect(),
        BadEdgeShape::SelfLoop => tau_inv.clone(),
    };
    let bad_index = match shape {
        BadEdgeShape::Distinct => n - 1,
        BadEdgeShape::SelfLoop => n,
    };
    edges.push(perm_edge(last, first, &closing));
    if shape == BadEdgeShape::SelfLoop {
        let w = rng.random_range(0..n);
        edges.push(DirectedEdge::from_fn(w, w, k, |a, b| a != b));
    }

    if n >= 4 {
        let mut present: std::collections::HashSet<(usize, usize)> =
            edges.iter().map(|e| (e.u, e.v)).collect();
        let want = n / 2;
        let mut added = 0;
        let mut attempts = 0;
        while added < want && attempts < 50 * want {
            attempts += 1;
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b || present.contains(&(a, b)) || present.contains(&(b, a)) {
                continue;
            }
            let table: Vec<bool> = (0..k * k).map(|_| rng.random_bool(0.5)).collect();
            let (ca, cb) = (col[a], col[b]);
            edges.push(DirectedEdge::from_fn(a, b, k, |x, y| {
                (x == ca && y == cb) || table[x * k + y]
            }));
            present.insert((a, b));
            added += 1;
        }
    }

    let inst = CspInstance::new(format!("one-bad-edge-n{n}-k{k}-s{seed}"), n, k, edges)?;
    let col = Coloring(col);
    let violated = inst.violated_edges(&col)?;
    if violated != [bad_index] {
        return Err(Error::contract(format!(
            "generator self-check failed: violated edges {violated:?}"
        )));
    }
    Ok((inst, col))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapMode {
    /// All relations admit a hidden random coloring.
    Planted,
    /// Each edge independently, with probability `rate`, forbids the hidden
    /// coloring's pair. When the oracle is applicable the generator resamples
    /// until the instance is certified unsatisfiable.
    Frustrated { rate: f64 },
    /// Exactly `count` uniformly chosen edges forbid the hidden coloring's
    /// pair, with the same resampling as `Frustrated`.
    FrustratedCount { count: usize },
}

#[derive(Debug, Clone)]
pub struct GapInstance {
    pub instance: CspInstance,
    pub hidden: Coloring,
    /// `1 - max_satisfiable_fraction`, present when the oracle could certify it.
    pub eta: Option<Ratio<u64>>,
    pub degree: usize,
}

/// Circulant offsets realizing degree `d` on `n` vertices; the flags say
/// whether a perfect matching (offset `n/2`) or self-loops pad odd degrees.
fn degree_plan(n: usize, d: usize) -> Result<(Vec<usize>, bool, bool)> {
    if d == 0 {
        return Err(Error::contract("degree must be positive"));
    }
    let half = d / 2;
    let odd = d % 2 == 1;
    let matching = odd && n.is_multiple_of(2);
    let loops = odd && n % 2 == 1;
    // offsets 1..=half must stay strictly below n/2
    if 2 * half >= n {
        return Err(Error::contract(format!(
            "degree {d} infeasible on {n} vertices"
        )));
    }
    Ok(((1..=half).collect(), matching, loops))
}

/// A `d`-regular instance, counting a self-loop once towards its vertex's
/// degree. Self-loops are used only when `n * d` is odd. Relations are
/// permutation constraints (each color of `u` admits exactly one color of
/// `v`), randomly oriented and relabeled.
pub fn generate_regular_gap_instance(
    n: usize,
    k: usize,
    d: usize,
    seed: u64,
    mode: GapMode,
) -> Result<GapInstance> {
    if k < 2 {
        return Err(Error::contract(format!("need k >= 2, got {k}")));
    }
    if n < 1 {
        return Err(Error::contract("need n >= 1"));
    }
    let (offsets, matching, loops) = degree_plan(n, d)?;
    if let GapMode::Frustrated { rate } = mode {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::contract(format!("frustration rate {rate} outside [0, 1]")));
        }
    }
    let oracle = Oracle::default();
    for attempt in 0..64u64 {
        let mut rng = rng::stream(seed, attempt);
        let mut label: Vec<usize> = (0..n).collect();
        label.shuffle(&mut rng);
        let hidden: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();

        let mut pairs = Vec::new();
        for &s in &offsets {
            for i in 0..n {
                pairs.push((i, (i + s) % n));
            }
        }
        if matching {
            for i in 0..n / 2 {
                pairs.push((i, i + n / 2));
            }
        }
        if loops {
            for i in 0..n {
                pairs.push((i, i));
            }
        }
        let mut chosen = vec![false; pairs.len()];
        if let GapMode::FrustratedCount { count } = mode {
            if count > pairs.len() {
                return Err(Error::contract(format!("cannot frustrate {count} of {} edges", pairs.len())));
            }
            for i in rand::seq::index::sample(&mut rng, pairs.len(), count) {
                chosen[i] = true;
            }
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for (idx, (a, b)) in pairs.into_iter().enumerate() {
            let (mut u, mut v) = (label[a], label[b]);
            if rng.random_bool(0.5) {
                std::mem::swap(&mut u, &mut v);
            }
            let frustrate = match mode {
                GapMode::Planted => false,
                GapMode::Frustrated { rate } => rng.random_bool(rate),
                GapMode::FrustratedCount { .. } => chosen[idx],
            };
            // a frustrated edge sends the hidden color of u anywhere but the
            // hidden color of v
            let target = if frustrate {
                (hidden[v] + 1 + rng.random_range(0..k - 1)) % k
            } else {
                hidden[v]
            };
            let p = perm_through(&mut rng, k, hidden[u], target);
            edges.push(perm_edge(u, v, &p));
        }
        let name = match mode {
            GapMode::Planted => format!("regular-planted-n{n}-k{k}-d{d}-s{seed}"),
            GapMode::Frustrated { .. } | GapMode::FrustratedCount { .. } => {
                format!("regular-frustrated-n{n}-k{k}-d{d}-s{seed}")
            }
        };
        let instance = CspInstance::new(name, n, k, edges)?;
        let hidden = Coloring(hidden);
        let eta = if oracle.applicable(&instance) {
            Some(Ratio::from_integer(1) - oracle.best(&instance)?.fraction)
        } else {
            None
        };
        let done = match (mode, eta) {
            (GapMode::Planted, _) => true,
            (_, None) => true,
            (GapMode::Frustrated { rate }, Some(e)) => rate == 0.0 || e > Ratio::from_integer(0),
            (GapMode::FrustratedCount { count }, Some(e)) => count == 0 || e > Ratio::from_integer(0),
        };
        if done {
            return Ok(GapInstance {
                instance,
                hidden,
                eta,
                degree: d,
            });
        }
    }
    Err(Error::contract(format!(
        "could not frustrate a ({n}, {k}, {d}) instance in 64 attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{max_satisfiable_fraction, satisfied_fraction};

    fn degree_of(inst: &CspInstance) -> Vec<usize> {
        let mut deg = vec![0; inst.n_vertices()];
        for e in inst.edges() {
            deg[e.u] += 1;
            if e.v != e.u {
                deg[e.v] += 1;
            }
        }
        deg
    }

    #[test]
    fn one_bad_edge_n8() {
        let (inst, col) = generate_one_bad_edge(8, 3, 0).unwrap();
        let m = inst.n_edges() as u64;
        assert_eq!(satisfied_fraction(&inst, &col).unwrap(), Ratio::new(m - 1, m));
        // brute force over 3^8 colorings
        assert_eq!(max_satisfiable_fraction(&inst).unwrap(), Ratio::new(m - 1, m));
    }

    #[test]
    fn one_bad_edge_minimal() {
        let (inst, col) = generate_one_bad_edge(2, 2, 0).unwrap();
        assert_eq!(inst.violated_edges(&col).unwrap().len(), 1);
        assert!(max_satisfiable_fraction(&inst).unwrap() < Ratio::from_integer(1));
    }

    #[test]
    fn one_bad_edge_preconditions() {
        assert!(generate_one_bad_edge(1, 3, 0).is_err());
        assert!(generate_one_bad_edge(4, 1, 0).is_err());
    }

    #[test]
    fn self_loop_shape() {
        for seed in 0..20 {
            let (inst, col) = generate_one_bad_edge_with(6, 3, seed, BadEdgeShape::SelfLoop).unwrap();
            let bad = inst.violated_edges(&col).unwrap();
            assert_eq!(bad.len(), 1);
            assert!(inst.edges()[bad[0]].is_self_loop());
            assert!(max_satisfiable_fraction(&inst).unwrap() < Ratio::from_integer(1));
        }
    }

    #[test]
    fn distinct_shape_bad_edge_has_distinct_endpoints() {
        for seed in 0..20 {
            let (inst, col) = generate_one_bad_edge(5, 2, seed).unwrap();
            let bad = inst.violated_edges(&col).unwrap();
            assert!(!inst.edges()[bad[0]].is_self_loop());
            assert!(max_satisfiable_fraction(&inst).unwrap() < Ratio::from_integer(1));
        }
    }

    #[test]
    fn planted_is_satisfiable_and_regular() {
        for (n, k, d, seed) in [(6, 2, 3, 0), (7, 3, 3, 1), (8, 3, 4, 2), (5, 2, 2, 3), (9, 2, 1, 4)] {
            let g = generate_regular_gap_instance(n, k, d, seed, GapMode::Planted).unwrap();
            assert_eq!(g.eta, Some(Ratio::from_integer(0)));
            assert_eq!(
                satisfied_fraction(&g.instance, &g.hidden).unwrap(),
                Ratio::from_integer(1)
            );
            assert!(degree_of(&g.instance).iter().all(|&x| x == d), "{n} {d}");
        }
    }

    #[test]
    fn frustrated_eta_matches_oracle() {
        let g = generate_regular_gap_instance(6, 2, 3, 1, GapMode::Frustrated { rate: 0.3 }).unwrap();
        let max = max_satisfiable_fraction(&g.instance).unwrap();
        assert_eq!(g.eta.unwrap(), Ratio::from_integer(1) - max);
        assert!(g.eta.unwrap() > Ratio::from_integer(0));
    }

    #[test]
    fn frustrated_count_is_exact() {
        for seed in 0..10 {
            let g = generate_regular_gap_instance(40, 3, 3, seed, GapMode::FrustratedCount { count: 7 }).unwrap();
            assert_eq!(g.instance.violated_edges(&g.hidden).unwrap().len(), 7);
            assert_eq!(g.instance.n_edges(), 60);
        }
        assert!(generate_regular_gap_instance(6, 3, 2, 0, GapMode::FrustratedCount { count: 7 }).is_err());
    }

    #[test]
    fn degree_errors() {
        assert!(generate_regular_gap_instance(6, 2, 0, 0, GapMode::Planted).is_err());
        assert!(generate_regular_gap_instance(4, 2, 5, 0, GapMode::Planted).is_err());
        assert!(generate_regular_gap_instance(4, 2, 4, 0, GapMode::Planted).is_err());
        assert!(generate_regular_gap_instance(4, 2, 3, 0, GapMode::Planted).is_ok());
    }

    #[test]
    fn structural_fuzz() {
        let mut rng = rng::stream(99, 0);
        for i in 0..1000u64 {
            let n = rng.random_range(2..12);
            let k = rng.random_range(2..5);
            let inst = if i % 2 == 0 {
                generate_one_bad_edge(n, k, i).unwrap().0
            } else {
                let d = rng.random_range(1..n.min(5));
                let mode = if i % 4 == 1 {
                    GapMode::Planted
                } else {
                    GapMode::Frustrated { rate: 0.5 }
                };
                match generate_regular_gap_instance(n, k, d, i, mode) {
                    Ok(g) => g.instance,
                    Err(Error::Contract(_)) => continue,
                    Err(e) => panic!("{e}"),
                }
            };
            for e in inst.edges() {
                assert!(e.u < n && e.v < n);
                assert_eq!(e.table().len(), k);
                assert!(e.table().iter().all(|r| r.len() == k));
            }
        }
    }
}
