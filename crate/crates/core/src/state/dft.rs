use num_complex::Complex64;

use crate::{Error, Result};

/// The `n`-dimensional unitary DFT, `F[k][j] = exp(2πi·jk/n) / √n`, stored
/// densely.
#[derive(Debug, Clone)]
pub struct Dft {
    n: usize,
    m: Vec<Complex64>,
}

impl Dft {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::contract("DFT dimension must be positive"));
        }
        let scale = 1.0 / (n as f64).sqrt();
        let mut m = Vec::with_capacity(n * n);
        for k in 0..n {
            for j in 0..n {
                // reduce jk mod n first so large products keep full precision
                let e = ((j * k) % n) as f64 / n as f64;
                m.push(Complex64::from_polar(scale, 2.0 * std::f64::consts::PI * e));
            }
        }
        Ok(Dft { n, m })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.m.chunks(self.n)
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "DFT input length");
        self.rows()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Applies the conjugate transpose.
    pub fn apply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "DFT input length");
        (0..self.n)
            .map(|c| (0..self.n).map(|r| self.entry(r, c).conj() * x[r]).sum())
            .collect()
    }
}

/// `n x n` unitary DFT matrix as rows.
pub fn dft(n: usize) -> Result<Vec<Vec<Complex64>>> {
    Ok(Dft::new(n)?.rows().map(|r| r.to_vec()).collect())
}
