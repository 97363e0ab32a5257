//! Limit estimates from a short sequence of section norms.
//!
//! These are heuristic: the section norms converge algebraically in `N`
//! when the symbol has analytic-type corners (`n ≥ 1`) and only
//! logarithmically for `n ≤ 0`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Aitken Δ² on the last three values.
    Aitken,
    /// `x(N) = a·sech(π²/(b·log₂N + c))`, fitted through the last three values.
    LogSech,
    /// Last value, used when no model applies.
    Last,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub value: f64,
    pub model: Model,
}

/// Aitken Δ² limit of three consecutive terms.
pub fn aitken(x0: f64, x1: f64, x2: f64) -> Option<f64> {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let denom = d2 - d1;
    if denom == 0.0 || !denom.is_finite() {
        return None;
    }
    let v = x2 - d2 * d2 / denom;
    v.is_finite().then_some(v)
}

/// Limit `a` of the three-point fit `x_i = a·sech(π²/(b p_i + c))`.
///
/// For a trial `a`, `1/acosh(a/x_i)` must be affine in `p_i`; the collinearity
/// defect is bisected on `a ∈ (max x, upper]`.
pub fn log_sech(points: [(f64, f64); 3], upper: f64) -> Option<f64> {
    let [(p1, x1), (p2, x2), (p3, x3)] = points;
    if !(x1 > 0.0 && x1 < x2 && x2 < x3) || !(p1 < p2 && p2 < p3) {
        return None;
    }
    let defect = |a: f64| {
        let s1 = 1.0 / (a / x1).acosh();
        let s2 = 1.0 / (a / x2).acosh();
        let s3 = 1.0 / (a / x3).acosh();
        (s3 - s2) / (p3 - p2) - (s2 - s1) / (p2 - p1)
    };
    let mut lo = x3 * (1.0 + 1e-12);
    let mut hi = upper;
    if !(hi > lo) {
        return None;
    }
    let (flo, fhi) = (defect(lo), defect(hi));
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if defect(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Estimate of `lim ‖H_N‖` from section norms at sizes `sizes`.
///
/// The result is clamped to `[last value, upper]`.
pub fn extrapolate(sizes: &[usize], values: &[f64], logarithmic: bool, upper: f64) -> Extrapolation {
    let last = match values.last() {
        Some(&v) => v,
        None => {
            return Extrapolation {
                value: 0.0,
                model: Model::Last,
            }
        }
    };
    let k = values.len();
    let fallback = Extrapolation {
        value: last,
        model: Model::Last,
    };
    if k < 3 || sizes.len() != k {
        return fallback;
    }
    let (x0, x1, x2) = (values[k - 3], values[k - 2], values[k - 1]);
    let raw = if logarithmic {
        let pts = [
            ((sizes[k - 3] as f64).log2(), x0),
            ((sizes[k - 2] as f64).log2(), x1),
            ((sizes[k - 1] as f64).log2(), x2),
        ];
        log_sech(pts, upper).map(|v| (v, Model::LogSech))
    } else {
        aitken(x0, x1, x2).map(|v| (v, Model::Aitken))
    };
    match raw {
        Some((v, model)) => Extrapolation {
            value: v.clamp(last, upper.max(last)),
            model,
        },
        None => fallback,
    }
}
