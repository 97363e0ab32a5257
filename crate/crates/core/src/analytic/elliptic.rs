//! Elliptic integrals of the first kind and the rectangle modulus problem.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Arithmetic–geometric mean of two positive reals.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        a = an;
        b = bn;
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
    }
    0.5 * (a + b)
}

/// Complete integral `K(k) = π / (2 AGM(1, √(1 − k²)))`, given `k` and `k' = √(1 − k²)`.
pub fn complete_k(kp: f64) -> f64 {
    PI / (2.0 * agm(1.0, kp))
}

/// Carlson's symmetric integral `R_F(x, y, z)` for arguments off the negative real axis.
pub fn carlson_rf(mut x: Complex64, mut y: Complex64, mut z: Complex64) -> Complex64 {
    for _ in 0..200 {
        let mu = (x + y + z) / 3.0;
        let dev = [(mu - x).norm(), (mu - y).norm(), (mu - z).norm()]
            .into_iter()
            .fold(0.0, f64::max);
        if dev <= 1e-4 * mu.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
    }
    let mu = (x + y + z) / 3.0;
    let (dx, dy, dz) = (1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - e2 * e3 * (3.0 / 44.0)) / mu.sqrt()
}

/// Incomplete integral `F(w, k) = ∫_0^w dt/√((1 − t²)(1 − k²t²))` for `w` in
/// the open upper half-plane.
pub fn elliptic_f(w: Complex64, k: f64) -> Complex64 {
    let w2 = w * w;
    w * carlson_rf(1.0 - w2, 1.0 - k * k * w2, Complex64::new(1.0, 0.0))
}

/// Modulus pair `(k, k')` whose quarter periods satisfy `K(k')/K(k) = ratio`.
///
/// Bisection on `y = ln(k/k')`, with `k = (1 + e^{−2y})^{−1/2}` and
/// `k' = (1 + e^{2y})^{−1/2}` so that neither underflows near the ends.
pub fn solve_modulus(ratio: f64) -> Result<(f64, f64)> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidArgument(format!("period ratio {ratio} must be positive")));
    }
    let pair = |y: f64| ((1.0 + (-2.0 * y).exp()).powf(-0.5), (1.0 + (2.0 * y).exp()).powf(-0.5));
    let quotient = |y: f64| {
        let (k, kp) = pair(y);
        complete_k(k) / complete_k(kp)
    };
    let (mut lo, mut hi) = (-300.0f64, 300.0f64);
    if !(quotient(lo) > ratio && quotient(hi) < ratio) {
        return Err(Error::Numerical(format!("period ratio {ratio} out of range")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if quotient(mid) > ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(pair(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Midpoint-substitution quadrature of K(k) = ∫_0^{π/2} dθ/√(1 − k² sin²θ).
    fn k_by_quadrature(k: f64) -> f64 {
        let n = 20000;
        let h = 0.5 * PI / n as f64;
        (0..n)
            .map(|i| {
                let th = (i as f64 + 0.5) * h;
                h / (1.0 - k * k * th.sin().powi(2)).sqrt()
            })
            .sum()
    }

    #[test]
    fn complete_integral_values() {
        assert_abs_diff_eq!(complete_k(1.0), PI / 2.0, epsilon = 1e-15);
        for k in [0.1, 0.5, 0.9] {
            let kp = (1.0f64 - k * k).sqrt();
            assert_abs_diff_eq!(complete_k(kp), k_by_quadrature(k), epsilon = 1e-12);
        }
    }

    #[test]
    fn carlson_special_values() {
        // R_F(x, x, x) = x^{-1/2}; R_F(0, 1, 1) = π/2
        let x = Complex64::new(2.0, 1.0);
        assert_abs_diff_eq!((carlson_rf(x, x, x) - 1.0 / x.sqrt()).norm(), 0.0, epsilon = 1e-14);
        let one = Complex64::new(1.0, 0.0);
        assert_abs_diff_eq!((carlson_rf(Complex64::new(0.0, 0.0), one, one) - PI / 2.0).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn incomplete_integral_reaches_quarter_period() {
        let k = 0.6;
        let kp = 0.8;
        let near_one = elliptic_f(Complex64::new(1.0, 1e-12), k);
        assert_abs_diff_eq!(near_one.re, complete_k(kp), epsilon = 1e-5);
        let far = elliptic_f(Complex64::new(0.0, 1e9), k);
        assert_abs_diff_eq!(far.im, complete_k(k), epsilon = 1e-6);
        // derivative check at an interior point
        let w = Complex64::new(0.4, 0.7);
        let h = 1e-6;
        let fd = (elliptic_f(w + h, k) - elliptic_f(w - h, k)) / (2.0 * h);
        let exact = 1.0 / ((1.0 - w * w) * (1.0 - k * k * w * w)).sqrt();
        assert_abs_diff_eq!((fd - exact).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn modulus_solve() {
        for ratio in [0.2, 1.0, 3.0, 40.0] {
            let (k, kp) = solve_modulus(ratio).unwrap();
            assert_abs_diff_eq!(k * k + kp * kp, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(complete_k(k) / complete_k(kp), ratio, epsilon = 1e-10 * ratio);
        }
        let (k, kp) = solve_modulus(1.0).unwrap();
        assert_abs_diff_eq!(k, kp, epsilon = 1e-14);
        assert!(solve_modulus(0.0).is_err());
        assert!(solve_modulus(1e6).is_err());
    }
}
