//! Constants of the two-prover soundness argument.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::{Error, Result};

pub type Exact = Ratio<u128>;

fn ser_ratio<S: Serializer>(r: &Exact, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// `δ, μ, ν, ξ` and `s = min/3` for a given `(N, K)`, as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bt09Constants {
    pub n: u64,
    pub k: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub delta: Exact,
    #[serde(serialize_with = "ser_ratio")]
    pub mu: Exact,
    #[serde(serialize_with = "ser_ratio")]
    pub nu: Exact,
    #[serde(serialize_with = "ser_ratio")]
    pub xi: Exact,
    #[serde(serialize_with = "ser_ratio")]
    pub s: Exact,
}

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow("soundness constants"))
}

fn prod(xs: &[u128]) -> Result<u128> {
    xs.iter().try_fold(1u128, |acc, &x| mul(acc, x))
}

pub fn to_f64(r: &Exact) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Bt09Constants {
    pub fn delta_f64(&self) -> f64 {
        to_f64(&self.delta)
    }
    pub fn mu_f64(&self) -> f64 {
        to_f64(&self.mu)
    }
    pub fn nu_f64(&self) -> f64 {
        to_f64(&self.nu)
    }
    pub fn xi_f64(&self) -> f64 {
        to_f64(&self.xi)
    }
    pub fn s_f64(&self) -> f64 {
        to_f64(&self.s)
    }

    /// `1 - s`: no proof pair on an unsatisfiable instance may be accepted
    /// with higher probability.
    pub fn acceptance_ceiling(&self) -> f64 {
        1.0 - self.s_f64()
    }

    /// Lower bound on REJ(EdgeCons) once the three premises hold on an
    /// unsatisfiable instance: `(100K-1)² / (800² K⁴ N²)` (equal to `2ξ`).
    pub fn edge_cons_floor(&self) -> Exact {
        self.xi * Exact::from_integer(2)
    }

    /// `(100K - 1) / (100K)`.
    pub fn heavy_color_mass(&self) -> f64 {
        let k = self.k as f64;
        (100.0 * k - 1.0) / (100.0 * k)
    }
}

/// The four constants and `s` as functions of `(N, K)`.
pub fn bt09_constants(n: u64, k: u64) -> Result<Bt09Constants> {
    if n == 0 || k == 0 {
        return Err(Error::contract("N and K must be positive"));
    }
    let (n, k) = (n as u128, k as u128);
    let k4n2 = prod(&[k, k, k, k, n, n])?;
    let delta = Exact::new(1, prod(&[2, 1600 * 1600, k4n2])?);
    let mu = Exact::new(1, mul(1600 * 1600, k4n2)?);
    let nu = Exact::new(1, prod(&[64, k, n, n])?);
    let a = 100 * k - 1;
    let xi = Exact::new(mul(a, a)?, prod(&[2, 800 * 800, k4n2])?);
    let min = *[delta, mu, nu, xi].iter().min().expect("non-empty");
    let s = min / Exact::from_integer(3);
    Ok(Bt09Constants {
        n: n as u64,
        k: k as u64,
        delta,
        mu,
        nu,
        xi,
        s,
    })
}
