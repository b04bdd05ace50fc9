use num_rational::Ratio;
use rayon::prelude::*;

use super::{Coloring, CspInstance};
use crate::{Error, Result, DEFAULT_ENUMERATION_CAP};

/// Brute-force maximizer over all `K^N` colorings.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub cap: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleBest {
    /// Lowest-index maximizer, where vertex 0 is the least significant digit.
    pub coloring: Coloring,
    pub satisfied: u64,
    pub fraction: Ratio<u64>,
}

const BLOCK: u64 = 1 << 12;

impl Oracle {
    pub fn new(cap: u64) -> Self {
        Oracle { cap }
    }

    /// Number of colorings, if it fits under the cap.
    pub fn check(&self, inst: &CspInstance) -> Result<u64> {
        let size = (inst.alphabet_size() as u128).checked_pow(inst.n_vertices() as u32);
        match size {
            Some(s) if s <= self.cap as u128 => Ok(s as u64),
            _ => Err(Error::TooLarge {
                what: "instance for oracle".into(),
                size: size.unwrap_or(u128::MAX),
                cap: self.cap,
            }),
        }
    }

    pub fn applicable(&self, inst: &CspInstance) -> bool {
        self.check(inst).is_ok()
    }

    pub fn best(&self, inst: &CspInstance) -> Result<OracleBest> {
        let total = self.check(inst)?;
        let n = inst.n_vertices();
        let k = inst.alphabet_size();
        let blocks = total.div_ceil(BLOCK);
        let (sat, idx) = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let start = b * BLOCK;
                let end = (start + BLOCK).min(total);
                let mut colors = decode(start, n, k);
                let mut best = (0u64, start);
                let mut first = true;
                for i in start..end {
                    let s = inst.count_satisfied(&colors);
                    if first || s > best.0 {
                        best = (s, i);
                        first = false;
                    }
                    increment(&mut colors, k);
                }
                best
            })
            .reduce(|| (0, u64::MAX), pick);
        let m = inst.n_edges() as u64;
        let fraction = if m == 0 {
            Ratio::from_integer(1)
        } else {
            Ratio::new(sat, m)
        };
        Ok(OracleBest {
            coloring: Coloring(decode(idx, n, k)),
            satisfied: sat,
            fraction,
        })
    }
}

fn pick(a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

fn decode(mut idx: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for c in out.iter_mut() {
        *c = (idx % k as u64) as usize;
        idx /= k as u64;
    }
    out
}

fn increment(colors: &mut [usize], k: usize) {
    for c in colors.iter_mut() {
        *c += 1;
        if *c < k {
            return;
        }
        *c = 0;
    }
}

/// Exact maximum satisfied fraction, under the default enumeration cap.
pub fn max_satisfiable_fraction(inst: &CspInstance) -> Result<Ratio<u64>> {
    Oracle::default().best(inst).map(|b| b.fraction)
}

/// Min-conflicts hill climbing from `start`: sweep the vertices, moving each to
/// the color that minimizes its incident violations (ties keep the current
/// color, then the lowest index), until a sweep changes nothing.
pub fn local_search(inst: &CspInstance, start: &Coloring) -> Result<Coloring> {
    inst.check_coloring(start)?;
    let n = inst.n_vertices();
    let k = inst.alphabet_size();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in inst.edges().iter().enumerate() {
        incident[e.u].push(i);
        if e.v != e.u {
            incident[e.v].push(i);
        }
    }
    let mut colors = start.0.clone();
    let violations_at = |colors: &mut Vec<usize>, v: usize, c: usize| -> usize {
        let old = colors[v];
        colors[v] = c;
        let cnt = incident[v]
            .iter()
            .filter(|&&i| {
                let e = &inst.edges()[i];
                !e.allows(colors[e.u], colors[e.v])
            })
            .count();
        colors[v] = old;
        cnt
    };
    for _sweep in 0..1000 {
        let mut changed = false;
        for v in 0..n {
            let cur = colors[v];
            let mut best = (violations_at(&mut colors, v, cur), cur);
            for c in 0..k {
                let s = violations_at(&mut colors, v, c);
                if s < best.0 {
                    best = (s, c);
                }
            }
            if best.1 != cur {
                colors[v] = best.1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Coloring(colors))
}
