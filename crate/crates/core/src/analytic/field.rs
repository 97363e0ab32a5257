//! Uniform boundary samples, the conjugate function, and its distribution.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::circle::ArcSet;
use crate::error::{Error, Result};
use crate::hankel::format_value;

/// Samples of a function at `t_j = 2πj/M`, `M` a power of two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryField {
    pub samples: Vec<Complex64>,
}

fn check_grid(m: usize, min: usize) -> Result<()> {
    if m < min || !m.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "grid size must be a power of two ≥ {min}, got {m}"
        )));
    }
    Ok(())
}

impl BoundaryField {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        check_grid(samples.len(), 1)?;
        Ok(BoundaryField { samples })
    }

    /// Field whose Fourier coefficient of index `k` is `coeff(k)` for
    /// `|k| < M/2` and zero at the Nyquist index.
    pub fn from_coefficients<F: Fn(i64) -> Complex64>(m: usize, coeff: F) -> Result<Self> {
        check_grid(m, 2)?;
        let half = (m / 2) as i64;
        let mut buf: Vec<Complex64> = (0..m as i64)
            .map(|j| {
                let k = if j < half { j } else { j - m as i64 };
                if k == -half {
                    Complex64::new(0.0, 0.0)
                } else {
                    coeff(k)
                }
            })
            .collect();
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        Ok(BoundaryField { samples: buf })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.len() as f64
    }

    /// Coefficients `f̂(k)` in FFT order (index `j` holds `k = j` or `j − M`).
    pub fn coefficients(&self) -> Vec<Complex64> {
        let m = self.len();
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let s = 1.0 / m as f64;
        buf.iter().map(|c| c * s).collect()
    }

    /// Applies the multiplier `−i·sign(k)`, dropping the mean and Nyquist terms.
    pub fn conjugate(&self) -> BoundaryField {
        let m = self.len();
        let coeffs = self.coefficients();
        let half = m / 2;
        let mut buf: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if j == 0 || j == half {
                    Complex64::new(0.0, 0.0)
                } else if j < half {
                    c * Complex64::new(0.0, -1.0)
                } else {
                    c * Complex64::new(0.0, 1.0)
                }
            })
            .collect();
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        BoundaryField { samples: buf }
    }

    /// `t,re,im` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Numerical(e.to_string());
        w.write_record(["t", "re", "im"]).map_err(io)?;
        for (j, s) in self.samples.iter().enumerate() {
            w.write_record([format_value(self.angle(j)), format_value(s.re), format_value(s.im)])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
    }
}

/// Samples of the conjugate function `χ̃_E` with `χ̃_E` of mean zero,
/// from the exact indicator coefficients.
pub fn conjugate_fft(set: &ArcSet, m: usize) -> Result<BoundaryField> {
    check_grid(m, 256)?;
    BoundaryField::from_coefficients(m, |k| {
        let sign = if k > 0 { -1.0 } else if k < 0 { 1.0 } else { 0.0 };
        set.indicator_fourier(k) * Complex64::new(0.0, sign)
    })
}

/// `|{t : |χ̃_E(e^{it})| > y}| = 4 arctan(2 sin(|E|/2) / (2 sinh(πy)))`.
pub fn stein_weiss(measure: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::InvalidArgument(format!("level must be positive, got {y}")));
    }
    if !(0.0..=TAU).contains(&measure) {
        return Err(Error::InvalidArgument(format!("measure {measure} outside [0, 2π]")));
    }
    if measure == 0.0 || measure == TAU {
        return Ok(0.0);
    }
    let s = (0.5 * measure).sin().max(0.0);
    Ok(4.0 * (2.0 * s / (2.0 * (PI * y).sinh())).atan())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub y: Vec<f64>,
    pub empirical: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub sup_abs_deviation: f64,
    pub sup_relative_deviation: f64,
}

/// Empirical distribution of `|χ̃_E|` on an `M`-grid against the closed form.
pub fn distribution_check(set: &ArcSet, m: usize, y_grid: &[f64]) -> Result<DistributionReport> {
    let field = conjugate_fft(set, m)?;
    let mut mags: Vec<f64> = field.samples.iter().map(|s| s.re.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let measure = set.measure();
    let cell = TAU / m as f64;
    let mut report = DistributionReport {
        y: y_grid.to_vec(),
        empirical: Vec::with_capacity(y_grid.len()),
        closed_form: Vec::with_capacity(y_grid.len()),
        sup_abs_deviation: 0.0,
        sup_relative_deviation: 0.0,
    };
    for &y in y_grid {
        let exact = stein_weiss(measure, y)?;
        let above = mags.len() - mags.partition_point(|&v| v <= y);
        let emp = above as f64 * cell;
        let abs = (emp - exact).abs();
        let rel = if exact > 0.0 {
            abs / exact
        } else if abs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        report.sup_abs_deviation = report.sup_abs_deviation.max(abs);
        report.sup_relative_deviation = report.sup_relative_deviation.max(rel);
        report.empirical.push(emp);
        report.closed_form.push(exact);
    }
    Ok(report)
}
