//! The analytic function with real part the Poisson extension of `χ_E`,
//! and the inner function built from it.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle::ArcSet;
use crate::error::{Error, Result};

/// `H(z) = Σ (1/2π)[L − 2i(Log(1 − z e^{−ib}) − Log(1 − z e^{−ia}))]` over
/// arcs `(a, b)` of length `L`. Also valid on the circle away from `∂E`.
fn completion_unchecked(set: &ArcSet, z: Complex64) -> Complex64 {
    if set.is_full() {
        return Complex64::new(1.0, 0.0);
    }
    let one = Complex64::new(1.0, 0.0);
    set.arcs()
        .iter()
        .map(|a| {
            let lb = (one - z * Complex64::from_polar(1.0, -a.end())).ln();
            let la = (one - z * Complex64::from_polar(1.0, -a.start())).ln();
            (Complex64::new(a.length(), 0.0) - Complex64::new(0.0, 2.0) * (lb - la)) / TAU
        })
        .sum()
}

/// `v + iṽ` at an interior point, where `v` is the Poisson extension of `χ_E`
/// and `ṽ(0) = 0`.
pub fn analytic_completion(set: &ArcSet, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::InvalidArgument(format!("|z| = {} is not < 1", z.norm())));
    }
    Ok(completion_unchecked(set, z))
}

/// Derivative `Σ (i/π)[1/(e^{ib} − z) − 1/(e^{ia} − z)]`.
pub fn analytic_completion_derivative(set: &ArcSet, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::InvalidArgument(format!("|z| = {} is not < 1", z.norm())));
    }
    if set.is_full() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let i_pi = Complex64::new(0.0, 1.0 / PI);
    Ok(set
        .arcs()
        .iter()
        .map(|a| {
            i_pi * (1.0 / (Complex64::from_polar(1.0, a.end()) - z)
                - 1.0 / (Complex64::from_polar(1.0, a.start()) - z))
        })
        .sum())
}

/// Inner function `θ` with `θ(0) = 0` and `χ_I ∘ θ = χ_E` on the circle,
/// `I = (−|E|/2, |E|/2)`.
///
/// `θ = e^{−i|E|/2} τ(e^{iπH})` with `τ(ζ) = (ζ − ζ₀)/(ζ − ζ̄₀)`, `ζ₀ = e^{i|E|/2}`:
/// `e^{iπH}` maps the disk to the upper half-plane, sending `E` to the
/// negative axis; `τ` sends the negative axis to the arc `(0, |E|)`.
#[derive(Debug, Clone)]
pub struct InnerRemap {
    set: ArcSet,
    zeta0: Complex64,
    rotation: Complex64,
}

impl InnerRemap {
    pub fn new(set: &ArcSet) -> Result<Self> {
        let m = set.measure();
        if set.is_empty() || set.is_full() {
            return Err(Error::InvalidArgument(
                "inner remap needs 0 < |E| < 2π".into(),
            ));
        }
        Ok(InnerRemap {
            set: set.clone(),
            zeta0: Complex64::from_polar(1.0, 0.5 * m),
            rotation: Complex64::from_polar(1.0, -0.5 * m),
        })
    }

    pub fn target_arc(&self) -> ArcSet {
        ArcSet::centered_arc(0.5 * self.set.measure()).expect("0 < |E| < 2π")
    }

    fn remap_completion(&self, h: Complex64) -> Complex64 {
        let g = (Complex64::new(0.0, PI) * h).exp();
        self.rotation * (g - self.zeta0) / (g - self.zeta0.conj())
    }

    /// `θ(z)` for `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.remap_completion(analytic_completion(&self.set, z)?))
    }

    /// Boundary value `θ(e^{it})`, for `t` off `∂E`.
    pub fn eval_boundary(&self, t: f64) -> Complex64 {
        self.remap_completion(completion_unchecked(&self.set, Complex64::from_polar(1.0, t)))
    }

    /// `θ(e^{it_j})` on the uniform grid of size `m`.
    pub fn boundary_grid(&self, m: usize) -> Vec<Complex64> {
        (0..m)
            .into_par_iter()
            .map(|j| self.eval_boundary(TAU * j as f64 / m as f64))
            .collect()
    }
}

pub fn inner_remap(set: &ArcSet) -> Result<InnerRemap> {
    InnerRemap::new(set)
}
