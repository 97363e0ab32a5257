//! Verification suites with a pass/fail verdict per metric.

use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use extremal_core::analytic::distribution_check;
use extremal_core::conformal::unimodular_defect;
use extremal_core::hankel::{estimate_value, format_value, lambda_estimate, section_norm, DEFAULT_MAX_ITER, DEFAULT_TOL};
use extremal_core::toeplitz::build_tto;
use extremal_core::ArcSet;

use crate::output::{self, round, CliError, Format};
use crate::{OutputArgs, SetArgs};

const DEFAULT_SET: &str = "0.3:1.3,2:4.1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    SteinWeiss,
    Unimodular,
    Rotation,
    Majorization,
    TtoSymmetry,
    Monotonicity,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::SteinWeiss => "stein-weiss",
            Suite::Unimodular => "unimodular",
            Suite::Rotation => "rotation",
            Suite::Majorization => "majorization",
            Suite::TtoSymmetry => "tto-symmetry",
            Suite::Monotonicity => "monotonicity",
        }
    }
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    /// Arc half-width for the unimodular suite
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<usize>>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Serialize)]
pub struct Metric {
    name: String,
    value: f64,
    threshold: f64,
    passed: bool,
}

impl Metric {
    fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Metric {
            name: name.into(),
            value: round(value),
            threshold,
            passed: value <= threshold,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyResult {
    suite: &'static str,
    pub passed: bool,
    metrics: Vec<Metric>,
}

impl VerifyResult {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => output::json(self),
            Format::Csv => {
                let io = |e: csv::Error| CliError::Io(e.to_string());
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["suite", "metric", "value", "threshold", "passed"]).map_err(io)?;
                for m in &self.metrics {
                    w.write_record([
                        self.suite,
                        &m.name,
                        &format_value(m.value),
                        &format_value(m.threshold),
                        if m.passed { "true" } else { "false" },
                    ])
                    .map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }
}

fn schedule_or(args: &VerifyArgs, default: &[usize]) -> Result<Vec<usize>, CliError> {
    let s = args.schedule.clone().unwrap_or_else(|| default.to_vec());
    extremal_core::hankel::validate_schedule(&s)?;
    Ok(s)
}

fn stein_weiss(set: &ArcSet, grid: usize) -> Result<Vec<Metric>, CliError> {
    let ys: Vec<f64> = (0..40).map(|i| 0.05 + 1.95 * i as f64 / 39.0).collect();
    let report = distribution_check(set, grid, &ys)?;
    Ok(vec![Metric::at_most("sup_relative_deviation", report.sup_relative_deviation, 2e-2)])
}

fn rotation(set: &ArcSet, n: i64, size: usize, tol: f64) -> Result<Vec<Metric>, CliError> {
    let base = section_norm(set, n, size, tol, DEFAULT_MAX_ITER)?.value;
    let (mut norm_dev, mut fourier_dev) = (0.0f64, 0.0f64);
    for theta in [0.3, 1.7, 4.0] {
        let rot = set.rotate(theta);
        let v = section_norm(&rot, n, size, tol, DEFAULT_MAX_ITER)?.value;
        norm_dev = norm_dev.max((v - base).abs());
        for k in -64i64..=64 {
            let expected = set.indicator_fourier(k) * Complex64::from_polar(1.0, -(k as f64) * theta);
            fourier_dev = fourier_dev.max((rot.indicator_fourier(k) - expected).norm());
        }
    }
    Ok(vec![
        Metric::at_most("section_norm_deviation", norm_dev, 1e-11),
        Metric::at_most("fourier_rotation_deviation", fourier_dev, 1e-13),
    ])
}

fn majorization(set: &ArcSet, orders: &[i64], schedule: &[usize], tol: f64) -> Result<Vec<Metric>, CliError> {
    let arc = ArcSet::centered_arc(0.5 * set.measure().max(f64::MIN_POSITIVE))?;
    let mut excess = f64::NEG_INFINITY;
    for &n in orders {
        let a = estimate_value(&lambda_estimate(set, n, schedule, tol)?);
        let b = estimate_value(&lambda_estimate(&arc, n, schedule, tol)?);
        excess = excess.max(a - b);
    }
    Ok(vec![Metric::at_most("max_excess_over_centered_arc", excess, 1e-3)])
}

fn tto_symmetry(set: &ArcSet, orders: &[i64]) -> Result<Vec<Metric>, CliError> {
    let mut worst = 0.0f64;
    for &n in orders {
        worst = worst.max(build_tto(set, n)?.symmetry_residual());
    }
    Ok(vec![Metric::at_most("symmetry_residual", worst, 1e-13)])
}

fn monotonicity(set: &ArcSet, n: Option<i64>, schedule: &[usize], tol: f64) -> Result<Vec<Metric>, CliError> {
    let orders: Vec<i64> = n.map(|n| vec![n]).unwrap_or_else(|| (1..=4).collect());
    let mut drop_in_size = 0.0f64;
    let mut estimates = Vec::new();
    for &n in &orders {
        let report = lambda_estimate(set, n, schedule, tol)?;
        let raw: Vec<f64> = report
            .entries
            .iter()
            .filter(|e| e.provenance.starts_with("section"))
            .map(|e| e.value)
            .collect();
        for w in raw.windows(2) {
            drop_in_size = drop_in_size.max(w[0] - w[1]);
        }
        estimates.push(estimate_value(&report));
    }
    let drop_in_order = estimates.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
    Ok(vec![
        Metric::at_most("max_decrease_in_section_size", drop_in_size, 1e-12),
        Metric::at_most("max_decrease_in_order", drop_in_order, 1e-3),
    ])
}

pub fn run(args: &VerifyArgs) -> Result<VerifyResult, CliError> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let set = match args.set.load()? {
        Some(s) => s,
        None => DEFAULT_SET.parse::<ArcSet>()?,
    };
    let orders = |default: std::ops::RangeInclusive<i64>| -> Vec<i64> {
        args.n.map(|n| vec![n]).unwrap_or_else(|| default.collect())
    };
    let metrics = match args.suite {
        Suite::SteinWeiss => stein_weiss(&set, args.grid.unwrap_or(1 << 20))?,
        Suite::Unimodular => {
            let alpha = args.alpha.unwrap_or(0.5 * PI);
            if !(alpha > 0.0 && alpha < PI) {
                return Err(CliError::Usage(format!("--alpha must lie in (0, π), got {alpha}")));
            }
            let d = unimodular_defect(alpha, args.grid.unwrap_or(1 << 16), 1e-3)?;
            vec![Metric::at_most("max_unimodular_defect", d, 1e-6)]
        }
        Suite::Rotation => {
            let size = schedule_or(args, &[1 << 10])?[0];
            rotation(&set, args.n.unwrap_or(1), size, args.tol.min(1e-13))?
        }
        Suite::Majorization => majorization(&set, &orders(1..=4), &schedule_or(args, &[1 << 10, 1 << 12])?, args.tol)?,
        Suite::TtoSymmetry => {
            let ns = orders(1..=8);
            if ns.iter().any(|&n| n < 1) {
                return Err(CliError::Usage("--n must be ≥ 1 for tto-symmetry".into()));
            }
            tto_symmetry(&set, &ns)?
        }
        Suite::Monotonicity => monotonicity(&set, args.n, &schedule_or(args, &[1 << 8, 1 << 10, 1 << 12])?, args.tol)?,
    };
    Ok(VerifyResult {
        suite: args.suite.name(),
        passed: metrics.iter().all(|m| m.passed),
        metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_threshold_is_inclusive() {
        assert!(Metric::at_most("m", 1e-3, 1e-3).passed);
        assert!(!Metric::at_most("m", 2e-3, 1e-3).passed);
        assert!(!Metric::at_most("m", f64::NAN, 1e-3).passed);
    }

    #[test]
    fn csv_rendering() {
        let r = VerifyResult {
            suite: "rotation",
            passed: true,
            metrics: vec![Metric::at_most("deviation", 0.0, 1e-11)],
        };
        assert_eq!(
            r.render(Format::Csv).unwrap(),
            "suite,metric,value,threshold,passed\nrotation,deviation,0,1e-11,true\n"
        );
    }

    #[test]
    fn suite_names_match_value_enum() {
        for s in Suite::value_variants() {
            assert_eq!(s.to_possible_value().unwrap().get_name(), s.name());
        }
    }
}
