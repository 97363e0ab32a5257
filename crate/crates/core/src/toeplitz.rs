//! Truncated Toeplitz operators with symbol `χ_E`, the coefficient-reversal
//! conjugation, and Fejér-kernel lower bounds.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle::ArcSet;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA_GRID: usize = 4096;

/// Compression of multiplication by `χ_E` to polynomials of degree `< n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzTruncation {
    matrix: DMatrix<Complex64>,
}

impl ToeplitzTruncation {
    /// Matrix with entry `(j, k) = χ̂_E(j − k)`.
    pub fn build(set: &ArcSet, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument(format!("dimension must be ≥ 1, got {n}")));
        }
        let n = n as usize;
        let diag: Vec<Complex64> = (0..2 * n - 1)
            .map(|d| set.indicator_fourier(d as i64 - (n as i64 - 1)))
            .collect();
        let matrix = DMatrix::from_fn(n, n, |j, k| diag[j + n - 1 - k]);
        Ok(ToeplitzTruncation { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: f.len(),
            });
        }
        Ok((0..self.dim())
            .map(|j| (0..self.dim()).map(|k| self.matrix[(j, k)] * f[k]).sum())
            .collect())
    }

    /// Operator 2-norm.
    pub fn norm(&self) -> f64 {
        self.matrix.singular_values().max()
    }

    /// Frobenius norm of `A* − C A C`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for j in 0..n {
            for k in 0..n {
                let adj = self.matrix[(k, j)].conj();
                let cac = self.matrix[(n - 1 - j, n - 1 - k)].conj();
                acc += (adj - cac).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

pub fn build_tto(set: &ArcSet, n: i64) -> Result<ToeplitzTruncation> {
    ToeplitzTruncation::build(set, n)
}

pub fn tto_norm(a: &ToeplitzTruncation) -> f64 {
    a.norm()
}

/// The conjugation `Σ a_j z^j ↦ Σ conj(a_{n−1−j}) z^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjugationC {
    pub n: usize,
}

impl ConjugationC {
    pub fn new(n: usize) -> Self {
        ConjugationC { n }
    }

    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: f.len(),
            });
        }
        Ok(f.iter().rev().map(|x| x.conj()).collect())
    }
}

/// `(1/2π) ∫ χ_E(e^{it}) F_n(t − α) dt` as the finite Cesàro sum
/// `Σ_{|j|<n} (1 − |j|/n) e^{ijα} χ̂_E(j)`.
pub fn fejer_lower_bound(set: &ArcSet, n: i64, alpha: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("expected n ≥ 1, got {n}")));
    }
    let nf = n as f64;
    let mut acc = set.indicator_fourier(0).re;
    for j in 1..n {
        let w = 1.0 - j as f64 / nf;
        let c = set.indicator_fourier(j) * Complex64::from_polar(1.0, j as f64 * alpha);
        // the ±j terms are conjugate
        acc += 2.0 * w * c.re;
    }
    Ok(acc)
}

/// Maximizes the Fejér bound over `α_i = 2πi/G`, `i = 0..G`, returning
/// `(α, bound)`; ties go to the smallest `α`.
pub fn best_fejer_bound(set: &ArcSet, n: i64, grid: usize) -> Result<(f64, f64)> {
    if grid == 0 {
        return Err(Error::InvalidArgument("empty α grid".into()));
    }
    if n < 1 {
        return Err(Error::InvalidArgument(format!("expected n ≥ 1, got {n}")));
    }
    let coeffs: Vec<Complex64> = (0..n).map(|j| set.indicator_fourier(j)).collect();
    let nf = n as f64;
    let values: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let alpha = TAU * i as f64 / grid as f64;
            let mut acc = coeffs[0].re;
            for (j, c) in coeffs.iter().enumerate().skip(1) {
                let w = 1.0 - j as f64 / nf;
                acc += 2.0 * w * (c * Complex64::from_polar(1.0, j as f64 * alpha)).re;
            }
            acc
        })
        .collect();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    Ok((TAU * best as f64 / grid as f64, values[best]))
}
