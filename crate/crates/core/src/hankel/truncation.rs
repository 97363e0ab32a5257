use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::circle::ArcSet;
use crate::error::{Error, Result};

/// `N × N` finite section of the Hankel operator with symbol `z̄ⁿχ_E`.
///
/// The section is stored as its anti-diagonal sequence `c_0..c_{2N-2}`
/// together with a precomputed spectrum for convolution-based products.
#[derive(Clone)]
pub struct HankelTruncation {
    n: i64,
    size: usize,
    coeffs: Vec<Complex64>,
    spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for HankelTruncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HankelTruncation")
            .field("n", &self.n)
            .field("size", &self.size)
            .finish()
    }
}

impl HankelTruncation {
    pub fn build(set: &ArcSet, n: i64, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("section size must be positive".into()));
        }
        let coeffs = set.symbol_coefficients(n, 2 * size - 1);
        Ok(Self::from_parts(n, size, coeffs))
    }

    /// Section with an arbitrary anti-diagonal sequence of length `2N − 1`.
    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "need an odd, positive number of anti-diagonals, got {}",
                coeffs.len()
            )));
        }
        let size = coeffs.len().div_ceil(2);
        Ok(Self::from_parts(0, size, coeffs))
    }

    fn from_parts(n: i64, size: usize, coeffs: Vec<Complex64>) -> Self {
        let len = (2 * size).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
        spectrum[..coeffs.len()].copy_from_slice(&coeffs);
        forward.process(&mut spectrum);
        let scale = 1.0 / len as f64;
        for s in &mut spectrum {
            *s *= scale;
        }
        HankelTruncation {
            n,
            size,
            coeffs,
            spectrum,
            forward,
            inverse,
        }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.coeffs[j + k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// `(Hv)_j = Σ_k c_{j+k} v_k` through a cyclic convolution.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.size];
        self.matvec_into(v, &mut out)?;
        Ok(out)
    }

    pub fn matvec_into(&self, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let n = self.size;
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        if out.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: out.len(),
            });
        }
        let len = self.spectrum.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        // reversed input turns the Hankel product into a convolution
        for (k, &x) in v.iter().enumerate() {
            buf[n - 1 - k] = x;
        }
        let mut scratch =
            vec![Complex64::new(0.0, 0.0); self.forward.get_inplace_scratch_len().max(self.inverse.get_inplace_scratch_len())];
        self.forward.process_with_scratch(&mut buf, &mut scratch);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process_with_scratch(&mut buf, &mut scratch);
        out.copy_from_slice(&buf[n - 1..2 * n - 1]);
        Ok(())
    }

    /// `H*v = conj(H conj(v))`, since the section is complex symmetric.
    pub fn adjoint_matvec_into(&self, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let conj: Vec<Complex64> = v.iter().map(|x| x.conj()).collect();
        self.matvec_into(&conj, out)?;
        for x in out.iter_mut() {
            *x = x.conj();
        }
        Ok(())
    }

    /// Direct `O(N²)` product.
    pub fn dense_matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                got: v.len(),
            });
        }
        Ok((0..self.size)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .map(|(k, &x)| self.coeffs[j + k] * x)
                    .sum()
            })
            .collect())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.size, self.size, |j, k| self.coeffs[j + k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_PI, PI};

    fn lcg_vector(n: usize, seed: u64) -> Vec<Complex64> {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..n).map(|_| Complex64::new(next(), next())).collect()
    }

    #[test]
    fn build_examples() {
        let h = HankelTruncation::build(&ArcSet::full(), 1, 2).unwrap();
        let d = h.to_dense();
        assert_eq!(d[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(d[(0, 1)].norm() + d[(1, 0)].norm() + d[(1, 1)].norm(), 0.0);

        let h = HankelTruncation::build(&ArcSet::full(), 3, 3).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let expected = if j + k == 2 { 1.0 } else { 0.0 };
                assert_eq!(h.entry(j, k), Complex64::new(expected, 0.0));
            }
        }

        let h = HankelTruncation::build(&ArcSet::arc(0.0, PI).unwrap(), 1, 2).unwrap();
        assert_abs_diff_eq!(h.entry(0, 0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!((h.entry(0, 1) - Complex64::new(0.0, FRAC_1_PI)).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(h.entry(0, 1), h.entry(1, 0));
        assert!(h.entry(1, 1).norm() < 1e-16);

        assert!(HankelTruncation::build(&ArcSet::full(), 1, 0).is_err());
    }

    #[test]
    fn matvec_examples() {
        let h = HankelTruncation::build(&ArcSet::full(), 1, 5).unwrap();
        let mut e0 = vec![Complex64::new(0.0, 0.0); 5];
        e0[0] = Complex64::new(1.0, 0.0);
        let out = h.matvec(&e0).unwrap();
        for (j, x) in out.iter().enumerate() {
            let expected = if j == 0 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!((x - Complex64::new(expected, 0.0)).norm(), 0.0, epsilon = 1e-15);
        }
        let set = ArcSet::normalize(&[(0.2, 1.3), (3.0, 4.1)]).unwrap();
        let h = HankelTruncation::build(&set, 2, 64).unwrap();
        let zero = h.matvec(&vec![Complex64::new(0.0, 0.0); 64]).unwrap();
        assert!(zero.iter().all(|x| x.norm() == 0.0));
        assert!(matches!(h.matvec(&[Complex64::new(1.0, 0.0)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn fft_matches_dense() {
        let set = ArcSet::normalize(&[(0.2, 1.3), (3.0, 4.1), (5.0, 5.5)]).unwrap();
        for &(n, size) in &[(1, 1), (2, 7), (-1, 64), (4, 300), (0, 1024)] {
            let h = HankelTruncation::build(&set, n, size).unwrap();
            let v = lcg_vector(size, size as u64);
            let fast = h.matvec(&v).unwrap();
            let slow = h.dense_matvec(&v).unwrap();
            let err: f64 = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            let norm: f64 = slow.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            assert!(err <= 1e-12 * norm, "n={n} N={size}: {err} vs {norm}");
        }
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let set = ArcSet::normalize(&[(0.2, 1.3), (3.0, 4.1)]).unwrap();
        let h = HankelTruncation::build(&set, 3, 40).unwrap();
        let d = h.to_dense();
        assert_eq!(d, d.transpose());
        let v = lcg_vector(40, 7);
        let mut out = vec![Complex64::new(0.0, 0.0); 40];
        h.adjoint_matvec_into(&v, &mut out).unwrap();
        let dv = d.adjoint() * nalgebra::DVector::from_vec(v);
        for (a, b) in out.iter().zip(dv.iter()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn from_coefficients_validates() {
        assert!(HankelTruncation::from_coefficients(vec![]).is_err());
        assert!(HankelTruncation::from_coefficients(vec![Complex64::new(1.0, 0.0); 2]).is_err());
        let h = HankelTruncation::from_coefficients(vec![Complex64::new(1.0, 0.0); 3]).unwrap();
        assert_eq!(h.size(), 2);
    }
}
