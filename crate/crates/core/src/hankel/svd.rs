//! Largest singular value of a Hankel section.

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::truncation::HankelTruncation;
use crate::error::{Error, Result};

/// Maximum Krylov dimension before an explicit restart.
pub const KRYLOV_CAP: usize = 48;

/// Largest section size accepted by the dense decomposition.
pub const DENSE_LIMIT: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularEstimate {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A square operator with access to its adjoint.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[Complex64], out: &mut [Complex64]);
    fn apply_adjoint(&self, v: &[Complex64], out: &mut [Complex64]);
}

impl LinearOperator for HankelTruncation {
    fn dim(&self) -> usize {
        self.size()
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        self.matvec_into(v, out).expect("dimensions checked by caller");
    }

    fn apply_adjoint(&self, v: &[Complex64], out: &mut [Complex64]) {
        self.adjoint_matvec_into(v, out).expect("dimensions checked by caller");
    }
}

impl LinearOperator for DMatrix<Complex64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..self.ncols()).map(|k| self[(j, k)] * v[k]).sum();
        }
    }

    fn apply_adjoint(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (k, o) in out.iter_mut().enumerate() {
            *o = (0..self.nrows()).map(|j| self[(j, k)].conj() * v[j]).sum();
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn scale(a: &mut [Complex64], s: f64) {
    for x in a {
        *x *= s;
    }
}

/// Two passes of classical Gram–Schmidt against an orthonormal basis.
fn reorthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}

/// Top singular triple of the bidiagonal matrix with the given diagonal and
/// superdiagonal; `cols` is `rows` or `rows + 1`.
fn bidiagonal_top(alphas: &[f64], betas: &[f64], cols: usize) -> (f64, Vec<f64>, Vec<f64>) {
    let rows = alphas.len();
    let mut b = DMatrix::<f64>::zeros(rows, cols);
    for i in 0..rows {
        b[(i, i)] = alphas[i];
        if i + 1 < cols {
            b[(i, i + 1)] = betas[i];
        }
    }
    let svd = SVD::new(b, true, true);
    let idx = svd.singular_values.imax();
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    (
        svd.singular_values[idx],
        u.column(idx).iter().copied().collect(),
        vt.row(idx).iter().copied().collect(),
    )
}

enum Run {
    Done(SingularEstimate),
    Restart(Vec<Complex64>, f64, f64, usize),
    Breakdown,
}

fn krylov_run<A: LinearOperator>(
    op: &A,
    start: Vec<Complex64>,
    tol: f64,
    budget: usize,
    used: usize,
) -> Run {
    let n = op.dim();
    let cap = KRYLOV_CAP.min(n).max(1);
    let mut vs: Vec<Vec<Complex64>> = vec![start];
    let mut us: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut scale_est = 0.0f64;
    let mut iterations = used;
    let mut last = (0.0, f64::INFINITY, Vec::new());

    for j in 0..cap {
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        op.apply(&vs[j], &mut u);
        if j > 0 {
            let b = betas[j - 1];
            for (x, y) in u.iter_mut().zip(&us[j - 1]) {
                *x -= b * y;
            }
        }
        reorthogonalize(&mut u, &us);
        let alpha = norm(&u);
        iterations += 1;
        scale_est = scale_est.max(alpha);
        if alpha <= 1e-13 * scale_est || alpha == 0.0 {
            if j == 0 {
                return Run::Breakdown;
            }
            // invariant subspace: the rectangular bidiagonal is exact
            let (sigma, _, _) = bidiagonal_top(&alphas, &betas, j + 1);
            return Run::Done(SingularEstimate {
                value: sigma,
                residual: 0.0,
                iterations,
                converged: true,
            });
        }
        scale(&mut u, 1.0 / alpha);
        us.push(u);
        alphas.push(alpha);

        let mut w = vec![Complex64::new(0.0, 0.0); n];
        op.apply_adjoint(&us[j], &mut w);
        for (x, y) in w.iter_mut().zip(&vs[j]) {
            *x -= alpha * y;
        }
        reorthogonalize(&mut w, &vs);
        let beta = norm(&w);
        scale_est = scale_est.max(beta);
        betas.push(beta);

        let (sigma, left, right) = bidiagonal_top(&alphas, &betas, j + 1);
        let invariant = beta <= 1e-13 * scale_est || vs.len() == n;
        let residual = if invariant { 0.0 } else { beta * left[j].abs() };
        if residual <= tol {
            return Run::Done(SingularEstimate {
                value: sigma,
                residual,
                iterations,
                converged: true,
            });
        }
        last = (sigma, residual, right);
        if iterations >= budget {
            return Run::Done(SingularEstimate {
                value: sigma,
                residual,
                iterations,
                converged: false,
            });
        }
        scale(&mut w, 1.0 / beta);
        vs.push(w);
    }

    let (sigma, residual, right) = last;
    let mut next = vec![Complex64::new(0.0, 0.0); n];
    for (v, &c) in vs.iter().zip(&right) {
        for (x, y) in next.iter_mut().zip(v) {
            *x += c * y;
        }
    }
    let nn = norm(&next);
    scale(&mut next, 1.0 / nn);
    Run::Restart(next, sigma, residual, iterations)
}

fn start_vector(n: usize, perturbed: bool) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|j| {
            if perturbed {
                let t = j as f64;
                Complex64::new(1.0 + 0.5 * (1.3 * t + 0.7).sin(), 0.25 * (0.9 * t + 0.3).cos())
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    let nn = norm(&v);
    scale(&mut v, 1.0 / nn);
    v
}

/// Largest singular value by restarted Golub–Kahan bidiagonalization with
/// full reorthogonalization.
///
/// `max_iter` bounds the number of operator–adjoint product pairs. The
/// start vector is the normalized all-ones vector; a fixed perturbation is
/// tried once if the first step breaks down.
pub fn top_singular_of<A: LinearOperator>(op: &A, tol: f64, max_iter: usize) -> Result<SingularEstimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be positive".into()));
    }
    let n = op.dim();
    for perturbed in [false, true] {
        let mut start = start_vector(n, perturbed);
        let mut used = 0;
        loop {
            match krylov_run(op, start, tol, max_iter, used) {
                Run::Done(est) => return Ok(est),
                Run::Breakdown => {
                    if used > 0 {
                        return Err(Error::Numerical("Krylov restart collapsed".into()));
                    }
                    break;
                }
                Run::Restart(next, sigma, residual, iterations) => {
                    if iterations >= max_iter {
                        return Ok(SingularEstimate {
                            value: sigma,
                            residual,
                            iterations,
                            converged: false,
                        });
                    }
                    start = next;
                    used = iterations;
                }
            }
        }
    }
    Ok(SingularEstimate {
        value: 0.0,
        residual: 0.0,
        iterations: 2,
        converged: false,
    })
}

/// Largest singular value of a Hankel section.
pub fn top_singular(h: &HankelTruncation, tol: f64, max_iter: usize) -> Result<SingularEstimate> {
    if h.is_zero() {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        return Ok(SingularEstimate {
            value: 0.0,
            residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    top_singular_of(h, tol, max_iter)
}

/// Largest singular value from a dense decomposition, for `N ≤ 1024`.
pub fn dense_top_singular(h: &HankelTruncation) -> Result<f64> {
    if h.size() > DENSE_LIMIT {
        return Err(Error::TooLarge(h.size()));
    }
    Ok(dense_norm(h.to_dense()))
}

pub(crate) fn dense_norm(m: DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Norm of the triangular Hankel matrix with anti-diagonals `c_0..c_m`, which
/// equals the distance from `c_0/z + ⋯ + c_m/z^{m+1}` to `H^∞`.
pub fn nehari_finite(c: &[Complex64]) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient sequence".into()));
    }
    let m = c.len();
    let mat = DMatrix::from_fn(m, m, |j, k| {
        if j + k < m {
            c[j + k]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(dense_norm(mat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::ArcSet;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_PI, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn full_circle_sections() {
        for size in [1usize, 2, 3, 17, 100] {
            let h = HankelTruncation::build(&ArcSet::full(), 1, size).unwrap();
            let est = top_singular(&h, 1e-12, 500).unwrap();
            assert!(est.converged);
            assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_entry_section() {
        let h = HankelTruncation::build(&ArcSet::arc(0.3, 0.3 + PI).unwrap(), 1, 1).unwrap();
        let est = top_singular(&h, 1e-12, 10).unwrap();
        assert_abs_diff_eq!(est.value, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn two_by_two_half_circle() {
        // [[1/2, i/π], [i/π, 0]]: σ² are the eigenvalues of HᴴH
        let h = HankelTruncation::build(&ArcSet::arc(0.0, PI).unwrap(), 1, 2).unwrap();
        let a = 0.5;
        let b = FRAC_1_PI;
        let tr = a * a + 2.0 * b * b;
        let det = (b * b) * (b * b);
        let sigma = ((tr + (tr * tr - 4.0 * det).sqrt()) / 2.0).sqrt();
        let est = top_singular(&h, 1e-13, 50).unwrap();
        assert_abs_diff_eq!(est.value, sigma, epsilon = 1e-13);
        assert_abs_diff_eq!(dense_top_singular(&h).unwrap(), sigma, epsilon = 1e-13);
    }

    #[test]
    fn dense_examples() {
        let h = HankelTruncation::from_coefficients(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(dense_top_singular(&h).unwrap(), 1.0, epsilon = 1e-15);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let h = HankelTruncation::from_coefficients(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(dense_top_singular(&h).unwrap(), golden, epsilon = 1e-14);
        let big = HankelTruncation::build(&ArcSet::full(), 1, 1025).unwrap();
        assert!(matches!(dense_top_singular(&big), Err(Error::TooLarge(1025))));
    }

    #[test]
    fn random_hankel_agrees_with_dense() {
        let mut s = 12345u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..5 {
            let coeffs: Vec<Complex64> = (0..31).map(|_| c(next(), next())).collect();
            let h = HankelTruncation::from_coefficients(coeffs).unwrap();
            let est = top_singular(&h, 1e-12, 2000).unwrap();
            assert!(est.converged);
            assert_abs_diff_eq!(est.value, dense_top_singular(&h).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn indicator_sections_agree_with_dense() {
        let set = ArcSet::normalize(&[(0.2, 1.3), (3.0, 4.1)]).unwrap();
        for n in [-2i64, 0, 1, 3] {
            let h = HankelTruncation::build(&set, n, 200).unwrap();
            let est = top_singular(&h, 1e-11, 5000).unwrap();
            assert!(est.converged, "n={n}: {est:?}");
            assert_abs_diff_eq!(est.value, dense_top_singular(&h).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_section() {
        let h = HankelTruncation::build(&ArcSet::full(), 0, 8).unwrap();
        let est = top_singular(&h, 1e-10, 10).unwrap();
        assert_eq!(est.value, 0.0);
        assert!(est.converged);
        assert!(top_singular(&h, 0.0, 10).is_err());
    }

    #[test]
    fn deterministic() {
        let set = ArcSet::normalize(&[(0.2, 1.3), (3.0, 4.1)]).unwrap();
        let h = HankelTruncation::build(&set, 1, 500).unwrap();
        let a = top_singular(&h, 1e-10, 1000).unwrap();
        let b = top_singular(&h, 1e-10, 1000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nonconvergence_reported() {
        let set = ArcSet::normalize(&[(0.2, 1.3), (3.0, 4.1)]).unwrap();
        let h = HankelTruncation::build(&set, 0, 500).unwrap();
        let est = top_singular(&h, 1e-15, 2).unwrap();
        assert!(!est.converged);
        assert!(est.value > 0.0);
        assert_eq!(est.iterations, 2);
    }

    #[test]
    fn nehari_examples() {
        assert_abs_diff_eq!(nehari_finite(&[c(1.0, 0.0)]).unwrap(), 1.0);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert_abs_diff_eq!(nehari_finite(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), golden, epsilon = 1e-14);
        assert_eq!(nehari_finite(&[c(0.0, 0.0); 4]).unwrap(), 0.0);
        assert!(nehari_finite(&[]).is_err());
    }

    #[test]
    fn krylov_on_dense_operator() {
        let m = DMatrix::from_fn(6, 6, |j, k| c((j as f64 + 1.0) / (k as f64 + 2.0), (j * k) as f64 * 0.1));
        let est = top_singular_of(&m, 1e-12, 200).unwrap();
        assert_abs_diff_eq!(est.value, dense_norm(m), epsilon = 1e-11);
    }
}
