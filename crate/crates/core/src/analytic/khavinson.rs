//! Near-extremal functions for `Λ_0(E)`: a Blaschke product that sends each
//! arc of `E` to the upper half of the circle, followed by a conformal map of
//! the disk onto a thin rectangle of perimeter `1/N`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::elliptic::{complete_k, elliptic_f, solve_modulus};
use super::field::BoundaryField;
use super::quadrature::{gauss, tanh_sinh};
use crate::circle::ArcSet;
use crate::error::{Error, Result};

/// Smallest modulus accepted by the rectangle map (flat rectangles).
const MIN_MODULUS: f64 = 1e-20;
/// Smallest complementary modulus accepted (tall rectangles).
const MIN_COMPLEMENTARY: f64 = 1e-6;

/// `φ = (g − i)/(g + i)` with `g = e^{i|E|/2} Π (1 − z e^{−ib_j})/(1 − z e^{−ia_j})`.
///
/// `g` maps the disk onto the upper half-plane, negative on `E` and positive
/// off it, so `φ` is a Blaschke product of degree `N` that covers the upper
/// semicircle on each arc of `E`.
#[derive(Debug, Clone)]
pub struct ArcBlaschke {
    phase: Complex64,
    starts: Vec<Complex64>,
    ends: Vec<Complex64>,
}

fn product_and_derivative(z: Complex64, roots: &[Complex64]) -> (Complex64, Complex64) {
    // Π (1 − z r̄_j) and its derivative
    let one = Complex64::new(1.0, 0.0);
    let mut p = one;
    let mut dp = Complex64::new(0.0, 0.0);
    for r in roots {
        let f = one - z * r.conj();
        dp = dp * f - p * r.conj();
        p *= f;
    }
    (p, dp)
}

impl ArcBlaschke {
    pub fn new(set: &ArcSet) -> Result<Self> {
        if set.is_empty() || set.is_full() {
            return Err(Error::InvalidArgument("need 0 < |E| < 2π".into()));
        }
        Ok(ArcBlaschke {
            phase: Complex64::from_polar(1.0, 0.5 * set.measure()),
            starts: set.arcs().iter().map(|a| Complex64::from_polar(1.0, a.start())).collect(),
            ends: set.arcs().iter().map(|a| Complex64::from_polar(1.0, a.end())).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.starts.len()
    }

    /// `(φ(z), φ'(z))`.
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let (p, dp) = product_and_derivative(z, &self.ends);
        let (q, dq) = product_and_derivative(z, &self.starts);
        let (p, dp) = (self.phase * p, self.phase * dp);
        let i = Complex64::new(0.0, 1.0);
        let den = p + i * q;
        let phi = (p - i * q) / den;
        let dphi = 2.0 * i * (dp * q - p * dq) / (den * den);
        (phi, dphi)
    }
}

/// Conformal map of the disk onto the rectangle `[−W, W] × [−H, H]` with
/// `±1 ↦ ±W` and `0 ↦ 0`.
///
/// `ρ(z) = λ(F(u(z)/√k, k) − iK'/2)` with `u(z) = (z + i)/(1 + iz)` and
/// `λ = W/K`; the corners have preimages `e^{is_c}`, `u(e^{is_c}) = ±√k, ±1/√k`.
#[derive(Debug, Clone, Serialize)]
pub struct DiskToRectangle {
    pub half_width: f64,
    pub half_height: f64,
    pub k: f64,
    pub kp: f64,
    quarter: f64,
    quarter_prime: f64,
    scale: f64,
    corners: [Complex64; 4],
}

impl DiskToRectangle {
    pub fn new(half_width: f64, half_height: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_height > 0.0) {
            return Err(Error::InvalidArgument("rectangle sides must be positive".into()));
        }
        let (k, kp) = solve_modulus(half_height / half_width * 2.0)?;
        if k < MIN_MODULUS || kp < MIN_COMPLEMENTARY {
            return Err(Error::Numerical(format!(
                "rectangle aspect ratio too extreme (k = {k:.3e}, k' = {kp:.3e})"
            )));
        }
        let quarter = complete_k(kp);
        let quarter_prime = complete_k(k);
        let sk = k.sqrt();
        let corners = [sk, -sk, 1.0 / sk, -1.0 / sk].map(|u: f64| Complex64::from_polar(1.0, 2.0 * u.atan() - FRAC_PI_2));
        Ok(DiskToRectangle {
            half_width,
            half_height,
            k,
            kp,
            quarter,
            quarter_prime,
            scale: half_width / quarter,
            corners,
        })
    }

    /// Corner preimages `e^{is_c}` on the unit circle.
    pub fn corner_preimages(&self) -> [Complex64; 4] {
        self.corners
    }

    /// `ρ(z)` for `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let u = (z + i) / (1.0 + i * z);
        let w = u / self.k.sqrt();
        self.scale * (elliptic_f(w, self.k) - i * (0.5 * self.quarter_prime))
    }

    /// `ρ'(z) = 2λ / ((1 + k) Π √(1 − z ē_c))`, valid on the closed disk
    /// except at the corner preimages `e_c`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let root: Complex64 = self
            .corners
            .iter()
            .map(|c| (one - z * c.conj()).sqrt())
            .product();
        2.0 * self.scale / ((1.0 + self.k) * root)
    }
}

/// Boundary data and achieved values of a near-extremal function.
#[derive(Debug, Clone, Serialize)]
pub struct KhavinsonWitness {
    pub eps: f64,
    pub arc_count: usize,
    pub grid: usize,
    pub half_width: f64,
    pub half_height: f64,
    pub perimeter: f64,
    pub modulus: f64,
    pub complementary_modulus: f64,
    pub corner_preimages: Vec<f64>,
    pub l1_norm: f64,
    pub functional_value: Complex64,
    #[serde(skip)]
    pub field: BoundaryField,
}

/// Evaluates `F(e^{it}) = −2πi ρ'(φ) φ'` at boundary angles.
struct WitnessIntegrand {
    inner: ArcBlaschke,
    rect: DiskToRectangle,
}

impl WitnessIntegrand {
    fn eval(&self, t: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, t);
        let (phi, dphi) = self.inner.eval(z);
        Complex64::new(0.0, -TAU) * self.rect.derivative(phi) * dphi
    }

    fn boundary_arg(&self, t: f64) -> f64 {
        self.inner.eval(Complex64::from_polar(1.0, t)).0.arg()
    }
}

/// Solves `arg φ(e^{it}) = target` on `(lo, hi)`, where the argument increases
/// monotonically along the lifted branch.
fn bisect_arg<F: Fn(f64) -> f64>(arg: F, lo: f64, hi: f64, target: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if arg(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= 1e-17 * b.abs().max(1.0) {
            break;
        }
    }
    0.5 * (a + b)
}

fn corner_angles(integrand: &WitnessIntegrand, set: &ArcSet) -> Vec<f64> {
    let s: Vec<f64> = integrand.rect.corner_preimages().iter().map(|c| c.arg()).collect();
    let upper: Vec<f64> = s.iter().copied().filter(|&v| v > 0.0).collect();
    let lower: Vec<f64> = s.iter().copied().filter(|&v| v <= 0.0).map(|v| v + TAU).collect();
    let arcs = set.arcs();
    let n = arcs.len();
    let mut out = Vec::with_capacity(4 * n);
    for (j, a) in arcs.iter().enumerate() {
        let (lo, hi) = (a.start(), a.unwrapped_end());
        let on_arc = |t: f64| {
            let v = integrand.boundary_arg(t);
            if v < -FRAC_PI_2 {
                v + TAU
            } else {
                v
            }
        };
        for &target in &upper {
            out.push(bisect_arg(on_arc, lo, hi, target));
        }
        let next = arcs[(j + 1) % n].start();
        let mut gap_hi = next + TAU * ((hi - next) / TAU).ceil();
        if gap_hi <= hi {
            gap_hi += TAU;
        }
        let on_gap = |t: f64| {
            let v = integrand.boundary_arg(t);
            if v < FRAC_PI_2 {
                v + TAU
            } else {
                v
            }
        };
        for &target in &lower {
            out.push(bisect_arg(on_gap, hi, gap_hi, target));
        }
    }
    let mut out: Vec<f64> = out.into_iter().map(|t| t.rem_euclid(TAU)).collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Builds the near-extremal function for `E` and `ε` and integrates it on the
/// `M`-grid, with panels split at `∂E` and at the corner preimages.
pub fn khavinson_witness(set: &ArcSet, eps: f64, m: usize) -> Result<KhavinsonWitness> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidArgument(format!("ε = {eps} outside (0, 1/2)")));
    }
    if m < 16 || !m.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("grid must be a power of two ≥ 16, got {m}")));
    }
    let inner = ArcBlaschke::new(set)?;
    let count = inner.degree();
    let nf = count as f64;
    let half_width = (1.0 - 2.0 * eps) / (4.0 * nf);
    let half_height = eps / (2.0 * nf);
    let rect = DiskToRectangle::new(half_width, half_height)?;
    let integrand = WitnessIntegrand { inner, rect };
    let corners = corner_angles(&integrand, set);

    let mut breaks: Vec<(f64, bool)> = corners.iter().map(|&t| (t, true)).collect();
    breaks.extend(set.boundary_points().into_iter().map(|t| (t, false)));
    breaks.sort_by(|a, b| a.0.total_cmp(&b.0));

    let cell = TAU / m as f64;
    let near_corner = |x: f64, len: f64| {
        corners.iter().any(|&c| {
            let d = (x - c).rem_euclid(TAU);
            d.min(TAU - d) <= len
        })
    };
    let zero = (0.0, Complex64::new(0.0, 0.0));
    let (l1, functional) = (0..m)
        .into_par_iter()
        .map(|j| {
            let lo = j as f64 * cell;
            let hi = (j + 1) as f64 * cell;
            let mut cuts = vec![lo];
            cuts.extend(breaks.iter().map(|b| b.0).filter(|&t| t > lo && t < hi));
            cuts.push(hi);
            let mut acc = zero;
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let len = b - a;
                if len <= 0.0 {
                    continue;
                }
                let in_set = set.contains(0.5 * (a + b));
                let f = |t: f64| {
                    let v = integrand.eval(t);
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return (0.0, Complex64::new(0.0, 0.0));
                    }
                    let weighted = if in_set { v * Complex64::from_polar(1.0, t) } else { Complex64::new(0.0, 0.0) };
                    (v.norm(), weighted)
                };
                let part = if near_corner(a, len) || near_corner(b, len) {
                    tanh_sinh(&|t| Pair::from(f(t)), a, b)
                } else {
                    gauss(&|t| Pair::from(f(t)), a, b)
                };
                acc.0 += part.0;
                acc.1 += part.1;
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(zero, |x, y| (x.0 + y.0, x.1 + y.1));

    let samples: Vec<Complex64> = (0..m).into_par_iter().map(|j| integrand.eval(j as f64 * cell)).collect();
    Ok(KhavinsonWitness {
        eps,
        arc_count: count,
        grid: m,
        half_width,
        half_height,
        perimeter: 4.0 * (half_width + half_height),
        modulus: integrand.rect.k,
        complementary_modulus: integrand.rect.kp,
        corner_preimages: corners,
        l1_norm: l1 / TAU,
        functional_value: functional / TAU,
        field: BoundaryField { samples },
    })
}

/// `(|F|, F·e^{it}·χ_E)` accumulated together.
#[derive(Debug, Clone, Copy, Default)]
struct Pair(f64, Complex64);

impl From<(f64, Complex64)> for Pair {
    fn from(v: (f64, Complex64)) -> Self {
        Pair(v.0, v.1)
    }
}

impl std::ops::Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl std::ops::Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, s: f64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}
