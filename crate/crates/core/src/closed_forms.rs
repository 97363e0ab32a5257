//! Exact values and analytic bounds for `Λ_n(E) = dist(z̄ⁿχ_E, H^∞)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::ArcSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    StrictUpper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaValue {
    pub value: f64,
    pub exactness: Exactness,
}

impl LambdaValue {
    pub fn exact(value: f64) -> Self {
        LambdaValue {
            value,
            exactness: Exactness::Exact,
        }
    }
}

/// Value for the endpoint measures `|E| = 0` and `|E| = 2π`, `None` otherwise.
pub fn endpoint_value(measure: f64, n: i64) -> Option<f64> {
    if measure <= 0.0 {
        Some(0.0)
    } else if measure >= TAU {
        Some(if n >= 1 { 1.0 } else { 0.0 })
    } else {
        None
    }
}

/// `Λ_n(E)` for `n ≤ 0`: one half for every proper nonnull set.
pub fn lambda_nonpositive(set: &ArcSet, n: i64) -> Result<LambdaValue> {
    if n > 0 {
        return Err(Error::InvalidArgument(format!("expected n ≤ 0, got {n}")));
    }
    let value = endpoint_value(set.measure(), n).unwrap_or(0.5);
    Ok(LambdaValue::exact(value))
}

/// `β = πα/(π + 2α)` without range checks.
fn beta(alpha: f64) -> f64 {
    PI * alpha / (PI + 2.0 * alpha)
}

/// `Λ_1(E) = ½ sec(π(|E|/2)/(π + |E|))`, which depends on `|E|` only.
pub fn lambda_one(measure: f64) -> Result<LambdaValue> {
    if !(0.0..=TAU).contains(&measure) {
        return Err(Error::InvalidArgument(format!(
            "measure {measure} outside [0, 2π]"
        )));
    }
    if let Some(v) = endpoint_value(measure, 1) {
        return Ok(LambdaValue::exact(v));
    }
    Ok(LambdaValue::exact(0.5 / beta(0.5 * measure).cos()))
}

/// `(max(1/2, |E|/2π), 1)`: a lower bound and a strict upper bound for `n ≥ 1`.
pub fn lambda_bounds(set: &ArcSet, n: i64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("expected n ≥ 1, got {n}")));
    }
    let m = set.measure();
    if endpoint_value(m, n).is_some() {
        return Err(Error::InvalidArgument(
            "endpoint measure has an exact value instead of bounds".into(),
        ));
    }
    Ok((0.5f64.max(m / TAU), 1.0))
}

pub fn beta_of_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidArgument(format!("α = {alpha} outside (0, π)")));
    }
    Ok(beta(alpha))
}

/// Intersection points `e^{±i arccos(1/(2r))/n}` of `|zⁿ − 1/r| = 1` with the unit circle.
pub fn corner_points(n: i64, r: f64) -> Result<(Complex64, Complex64)> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("expected n ≥ 1, got {n}")));
    }
    if !(0.5..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r = {r} outside [1/2, 1)")));
    }
    let t = (0.5 / r).min(1.0).acos() / n as f64;
    Ok((Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, -t)))
}

/// `1 − (π − α)/(π n sin²(α/2))`, a lower bound when `E ⊇ (−α, α)`.
pub fn large_n_lower_bound(alpha: f64, n: i64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidArgument(format!("α = {alpha} outside (0, π)")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument(format!("expected n ≥ 1, got {n}")));
    }
    let s = (0.5 * alpha).sin();
    Ok(1.0 - (PI - alpha) / (PI * n as f64 * s * s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn nonpositive_values() {
        let half = ArcSet::arc(0.0, PI).unwrap();
        assert_eq!(lambda_nonpositive(&half, 0).unwrap().value, 0.5);
        assert_eq!(lambda_nonpositive(&ArcSet::empty(), -1).unwrap().value, 0.0);
        assert_eq!(lambda_nonpositive(&ArcSet::full(), -3).unwrap().value, 0.0);
        assert!(lambda_nonpositive(&half, 1).is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn lambda_one_values() {
        assert_abs_diff_eq!(lambda_one(PI).unwrap().value, 0.7071067812, epsilon = 1e-10);
        assert_abs_diff_eq!(lambda_one(1e-12).unwrap().value, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(lambda_one(TAU - 1e-12).unwrap().value, 1.0, epsilon = 1e-11);
        assert_eq!(lambda_one(TAU).unwrap().value, 1.0);
        assert_eq!(lambda_one(0.0).unwrap().value, 0.0);
        assert!(lambda_one(7.0).is_err());
        assert!(lambda_one(-0.1).is_err());
    }

    #[test]
    fn bounds_values() {
        let e = ArcSet::arc(0.0, 1.5 * PI).unwrap();
        assert_abs_diff_eq!(lambda_bounds(&e, 2).unwrap().0, 0.75, epsilon = 1e-15);
        let small = ArcSet::arc(0.0, PI / 4.0).unwrap();
        assert_eq!(lambda_bounds(&small, 1).unwrap(), (0.5, 1.0));
        assert!(lambda_bounds(&ArcSet::full(), 1).is_err());
        assert!(lambda_bounds(&e, 0).is_err());
    }

    #[test]
    fn beta_values() {
        assert_abs_diff_eq!(beta_of_alpha(PI / 2.0).unwrap(), PI / 4.0, epsilon = 1e-15);
        assert!(beta_of_alpha(1e-9).unwrap() < 1e-8);
        assert_abs_diff_eq!(beta_of_alpha(PI - 1e-9).unwrap(), PI / 3.0, epsilon = 1e-9);
        assert!(beta_of_alpha(0.0).is_err());
        assert!(beta_of_alpha(PI).is_err());
    }

    // Bisection on the unit circle for |z^n − 1/r| = 1, used as an oracle.
    fn corner_by_bisection(n: i64, r: f64) -> f64 {
        let g = |t: f64| (Complex64::from_polar(1.0, n as f64 * t) - 1.0 / r).norm() - 1.0;
        let (mut lo, mut hi) = (0.0, PI / (2.0 * n as f64));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn corner_values() {
        let (p, m) = corner_points(3, 0.5).unwrap();
        assert_eq!(p, Complex64::new(1.0, 0.0));
        assert_eq!(m, Complex64::new(1.0, 0.0));
        let r = 0.5f64.sqrt();
        let (p, m) = corner_points(1, r).unwrap();
        assert_abs_diff_eq!(p.arg(), PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.arg(), -PI / 4.0, epsilon = 1e-15);
        let (p, _) = corner_points(2, r).unwrap();
        assert_abs_diff_eq!(p.arg(), PI / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.arg(), corner_by_bisection(2, r), epsilon = 1e-14);
        assert!(corner_points(1, 1.0).is_err());
        assert!(corner_points(0, 0.7).is_err());
    }

    #[test]
    fn large_n_values() {
        assert_abs_diff_eq!(large_n_lower_bound(PI / 2.0, 10).unwrap(), 0.9, epsilon = 1e-15);
        assert!(large_n_lower_bound(PI - 1e-9, 5).unwrap() > 1.0 - 1e-8);
        assert!(large_n_lower_bound(1.0, 1_000_000).unwrap() > 0.999);
        assert!(large_n_lower_bound(0.0, 2).is_err());
        assert!(large_n_lower_bound(1.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn lambda_one_increasing(a in 1e-6..TAU - 1e-6, d in 1e-6..0.5f64) {
            let b = (a + d).min(TAU - 1e-9);
            prop_assume!(b > a);
            prop_assert!(lambda_one(b).unwrap().value > lambda_one(a).unwrap().value);
        }

        #[test]
        fn lambda_one_above_measure_bound(m in 1e-9..TAU - 1e-9) {
            let v = lambda_one(m).unwrap().value;
            prop_assert!(v >= 0.5f64.max(m / TAU));
            prop_assert!(v < 1.0 + 1e-15);
        }

        #[test]
        fn corner_relation(n in 1i64..12, r in 0.5..0.999f64) {
            let (p, m) = corner_points(n, r).unwrap();
            prop_assert!(((n as f64 * p.arg()).cos() - 0.5 / r).abs() <= 1e-14);
            prop_assert!((p.conj() - m).norm() <= 1e-15);
        }
    }
}
