//! Finite Hankel sections of `z̄ⁿχ_E` and estimates of their operator norm.

mod extrapolate;
mod report;
mod svd;
mod truncation;

use std::f64::consts::TAU;

use rayon::prelude::*;

pub use extrapolate::{aitken, extrapolate, log_sech, Extrapolation, Model};
pub use report::{format_value, round_significant, BoundEntry, BoundKind, BoundsReport};
pub use svd::{
    dense_top_singular, nehari_finite, top_singular, top_singular_of, LinearOperator,
    SingularEstimate, DENSE_LIMIT, KRYLOV_CAP,
};
pub use truncation::HankelTruncation;

use crate::circle::ArcSet;
use crate::closed_forms;
use crate::error::{Error, Result};

pub const DEFAULT_SCHEDULE: [usize; 3] = [1 << 10, 1 << 12, 1 << 14];
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 5000;

/// Norm of one section, `‖H_N‖`.
pub fn section_norm(set: &ArcSet, n: i64, size: usize, tol: f64, max_iter: usize) -> Result<SingularEstimate> {
    let h = HankelTruncation::build(set, n, size)?;
    top_singular(&h, tol, max_iter)
}

pub fn validate_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("empty truncation schedule".into()));
    }
    if schedule[0] == 0 {
        return Err(Error::InvalidArgument("section sizes must be positive".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("schedule must be strictly increasing".into()));
    }
    Ok(())
}

/// Bounds on `Λ_n(E)` from a schedule of section sizes.
pub fn lambda_estimate(set: &ArcSet, n: i64, schedule: &[usize], tol: f64) -> Result<BoundsReport> {
    lambda_estimate_with(set, n, schedule, tol, DEFAULT_MAX_ITER)
}

/// As [`lambda_estimate`] with an explicit iteration budget per section.
///
/// Every section norm is a lower bound, converged or not, because Ritz
/// values never exceed the top singular value.
pub fn lambda_estimate_with(
    set: &ArcSet,
    n: i64,
    schedule: &[usize],
    tol: f64,
    max_iter: usize,
) -> Result<BoundsReport> {
    validate_schedule(schedule)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut report = BoundsReport::new(set.clone(), n);
    let measure = set.measure();
    if let Some(v) = closed_forms::endpoint_value(measure, n) {
        report.push(v, BoundKind::Exact, "endpoint measure");
        return Ok(report);
    }

    let estimates: Vec<SingularEstimate> = schedule
        .par_iter()
        .map(|&size| section_norm(set, n, size, tol, max_iter))
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(estimates.len());
    for (&size, est) in schedule.iter().zip(&estimates) {
        report.push(est.value, BoundKind::Lower, format!("section N={size}"));
        if !est.converged {
            report.converged = false;
            report.warnings.push(format!(
                "section N={size} stopped after {} iterations with residual {:.3e}",
                est.iterations, est.residual
            ));
        }
        values.push(est.value);
    }
    if values.windows(2).any(|w| w[1] < w[0] - 1e-12) {
        report
            .warnings
            .push("section norms are not monotone in N".into());
    }
    let ex = extrapolate(schedule, &values, n <= 0, 1.0);
    let label = match ex.model {
        Model::Aitken => "extrapolated (aitken)",
        Model::LogSech => "extrapolated (log-sech fit)",
        Model::Last => "extrapolated (last section)",
    };
    report.push(ex.value, BoundKind::Estimate, label);

    if n <= 0 {
        let v = closed_forms::lambda_nonpositive(set, n)?;
        report.push(v.value, BoundKind::Exact, "closed form, n ≤ 0");
    } else {
        report.push(0.5f64.max(measure / TAU), BoundKind::Lower, "measure bound");
        report.push(1.0, BoundKind::Upper, "strict upper bound");
        if n == 1 {
            let v = closed_forms::lambda_one(measure)?;
            report.push(v.value, BoundKind::Exact, "closed form, n = 1");
        }
    }
    Ok(report)
}

/// Extrapolated value of `Λ_n(E)` from a report, falling back to the best lower bound.
pub fn estimate_value(report: &BoundsReport) -> f64 {
    report.estimate().or(report.exact()).unwrap_or(report.best_lower)
}
