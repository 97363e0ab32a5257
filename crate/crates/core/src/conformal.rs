//! Conformal map of the disk onto the lens domain for `n = 1`, the
//! best-approximation minimizer it induces, and the domain geometry.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::ArcSet;
use crate::closed_forms;
use crate::error::{Error, Result};
use crate::hankel::{lambda_estimate, BoundsReport};

/// Radius below which the minimizer uses its value at the origin.
const ORIGIN_RADIUS: f64 = 1e-8;

/// Distance to a corner treated as rounding error.
const CORNER_SNAP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcMapParams {
    pub alpha: f64,
    pub p: f64,
    pub beta: f64,
    pub r: f64,
}

impl ArcMapParams {
    pub fn new(alpha: f64) -> Result<Self> {
        let beta = closed_forms::beta_of_alpha(alpha)?;
        let p = PI / (PI + 2.0 * alpha);
        Ok(ArcMapParams {
            alpha,
            p,
            beta,
            r: 0.5 / beta.cos(),
        })
    }

    /// `Φ'(0) = p sin α / sin β`.
    pub fn derivative_at_origin(&self) -> f64 {
        self.p * self.alpha.sin() / self.beta.sin()
    }
}

/// `(z − e^{iα})/(e^{iα}z − 1)`, mapping the disk to the upper half-plane.
pub fn mobius_to_halfplane(z: Complex64, alpha: f64) -> Result<Complex64> {
    let a = Complex64::from_polar(1.0, alpha);
    let den = a * z - 1.0;
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!("{z}")));
    }
    Ok((z - a) / den)
}

/// Principal argument folded into `[0, π]`, for points of the closed upper half-plane.
fn upper_arg(z: Complex64) -> f64 {
    let t = z.arg();
    if t >= 0.0 {
        t
    } else if t < -FRAC_PI_2 {
        PI
    } else {
        0.0
    }
}

/// `(ζ^p − e^{iβ})/(e^{iβ}ζ^p − 1)` with the principal power on `arg ζ ∈ [0, π]`.
pub fn kober_to_lens(zeta: Complex64, params: &ArcMapParams) -> Complex64 {
    let eb = Complex64::from_polar(1.0, params.beta);
    let zp = Complex64::from_polar(zeta.norm().powf(params.p), params.p * upper_arg(zeta));
    (zp - eb) / (eb * zp - 1.0)
}

/// `Φ_{1,α}` as the composition of the half-plane map and the lens map.
///
/// Points where the half-plane image is large are evaluated through its
/// reciprocal. Inputs within rounding distance of a corner `e^{±iα}` map to
/// the corner image `e^{±iβ}`; the map is only Hölder continuous there.
pub fn phi_one(z: Complex64, params: &ArcMapParams) -> Complex64 {
    let a = Complex64::from_polar(1.0, params.alpha);
    let num = z - a;
    let den = a * z - 1.0;
    if num.norm() <= CORNER_SNAP {
        return Complex64::from_polar(1.0, params.beta);
    }
    if den.norm() <= CORNER_SNAP {
        return Complex64::from_polar(1.0, -params.beta);
    }
    if num.norm() >= den.norm() {
        // η = 1/ζ, so ζ^{−p} = |η|^p e^{−ip arg ζ}
        let eta = den / num;
        let arg = upper_arg(Complex64::new(eta.re, -eta.im));
        let zmp = Complex64::from_polar(eta.norm().powf(params.p), -params.p * arg);
        let eb = Complex64::from_polar(1.0, params.beta);
        (1.0 - eb * zmp) / (eb - zmp)
    } else {
        kober_to_lens(num / den, params)
    }
}

/// The single-fraction form of `Φ_{1,α}` with principal powers throughout.
///
/// It agrees with [`phi_one`] only where `arg ζ + α ≤ π` for the half-plane
/// image `ζ`; kept for comparison.
pub fn phi_one_single_fraction(z: Complex64, params: &ArcMapParams) -> Complex64 {
    let a = Complex64::from_polar(1.0, params.alpha);
    let den = a * z - 1.0;
    let top = ((z - a) / den).powf(params.p) - Complex64::from_polar(1.0, params.beta);
    let bottom = ((a * z - a * a) / den).powf(params.p) - 1.0;
    top / bottom
}

/// `r·Φ(z)/z`, with the value `r·Φ'(0)` near the origin.
pub fn minimizer(z: Complex64, params: &ArcMapParams) -> Complex64 {
    if z.norm() < ORIGIN_RADIUS {
        return Complex64::new(params.r * params.derivative_at_origin(), 0.0);
    }
    params.r * phi_one(z, params) / z
}

/// Which boundary points a defect scan visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryRegion {
    All,
    InsideArc,
    OutsideArc,
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `| |minimizer − z̄χ_I| − r |` at `e^{it}`.
fn defect_at(t: f64, params: &ArcMapParams) -> f64 {
    let z = Complex64::from_polar(1.0, t);
    let inside = angular_distance(t, 0.0) < params.alpha;
    let target = if inside { z.conj() } else { Complex64::new(0.0, 0.0) };
    ((minimizer(z, params) - target).norm() - params.r).abs()
}

/// Largest deviation of `|minimizer − z̄χ_I|` from `r_{1,α}` on a uniform
/// boundary grid, skipping points within `margin` of the corners `e^{±iα}`.
pub fn unimodular_defect(alpha: f64, grid: usize, margin: f64) -> Result<f64> {
    unimodular_defect_on(alpha, grid, margin, BoundaryRegion::All)
}

pub fn unimodular_defect_on(alpha: f64, grid: usize, margin: f64, region: BoundaryRegion) -> Result<f64> {
    if grid < 16 {
        return Err(Error::InvalidArgument(format!("grid must be ≥ 16, got {grid}")));
    }
    if !(margin > 0.0) {
        return Err(Error::InvalidArgument(format!("margin must be positive, got {margin}")));
    }
    let params = ArcMapParams::new(alpha)?;
    let defects: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|j| {
            let t = TAU * j as f64 / grid as f64;
            let near = angular_distance(t, alpha) <= margin || angular_distance(t, -alpha) <= margin;
            let inside = angular_distance(t, 0.0) < alpha;
            let wanted = match region {
                BoundaryRegion::All => true,
                BoundaryRegion::InsideArc => inside,
                BoundaryRegion::OutsideArc => !inside,
            };
            if near || !wanted {
                0.0
            } else {
                defect_at(t, &params)
            }
        })
        .collect();
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// One boundary sample: `(t, Φ(e^{it}), |u| − r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub t: f64,
    pub phi: Complex64,
    pub defect: f64,
}

pub fn boundary_samples(alpha: f64, grid: usize) -> Result<Vec<BoundarySample>> {
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let params = ArcMapParams::new(alpha)?;
    Ok((0..grid)
        .map(|j| {
            let t = TAU * j as f64 / grid as f64;
            let z = Complex64::from_polar(1.0, t);
            let inside = angular_distance(t, 0.0) < alpha;
            let target = if inside { z.conj() } else { Complex64::new(0.0, 0.0) };
            BoundarySample {
                t,
                phi: phi_one(z, &params),
                defect: (minimizer(z, &params) - target).norm() - params.r,
            }
        })
        .collect())
}

/// The domain `𝔻 \ {|zⁿ − 1/r| ≤ 1, |arg z| ≤ π/2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub n: i64,
    pub r: f64,
}

impl DomainSpec {
    pub fn new(n: i64, r: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument(format!("expected n ≥ 1, got {n}")));
        }
        if !(0.5..1.0).contains(&r) {
            return Err(Error::InvalidArgument(format!("r = {r} outside [1/2, 1)")));
        }
        Ok(DomainSpec { n, r })
    }
}

pub fn in_domain(z: Complex64, spec: &DomainSpec) -> bool {
    if z.norm() >= 1.0 {
        return false;
    }
    let removed = (z.powi(spec.n as i32) - 1.0 / spec.r).norm() <= 1.0
        && z.arg().abs() <= PI / (2.0 * spec.n as f64);
    !removed
}

/// Bounds on `Λ_n` of the arc `(−α, α)`; for `n = 1` the closed form and the
/// deviation of the extrapolated value are attached.
pub fn r_general(alpha: f64, n: i64, schedule: &[usize], tol: f64) -> Result<BoundsReport> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("expected n ≥ 1, got {n}")));
    }
    let arc = ArcSet::centered_arc(alpha)?;
    let mut report = lambda_estimate(&arc, n, schedule, tol)?;
    if n == 1 {
        if let (Some(est), Some(exact)) = (report.estimate(), report.exact()) {
            report.deviation = Some((est - exact).abs());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn params() {
        let p = ArcMapParams::new(FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(p.beta, PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.p, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.r, 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(ArcMapParams::new(PI).is_err());
    }

    #[test]
    fn mobius_examples() {
        let alpha = 0.9;
        assert_abs_diff_eq!((mobius_to_halfplane(c(0.0, 0.0), alpha).unwrap() - Complex64::from_polar(1.0, alpha)).norm(), 0.0, epsilon = 1e-15);
        assert!(mobius_to_halfplane(Complex64::from_polar(1.0, alpha), alpha).unwrap().norm() < 1e-15);
        assert_abs_diff_eq!((mobius_to_halfplane(c(-1.0, 0.0), alpha).unwrap() - 1.0).norm(), 0.0, epsilon = 1e-15);
        assert!(mobius_to_halfplane(c(0.3, -0.2), alpha).unwrap().im > 0.0);
        let pole = mobius_to_halfplane(Complex64::from_polar(1.0, -alpha), alpha);
        assert!(pole.map_or(true, |w| w.norm() > 1e14));
        assert!(matches!(mobius_to_halfplane(c(1.0, 0.0), 0.0), Err(Error::Singular(_))));
    }

    #[test]
    fn kober_examples() {
        let p = ArcMapParams::new(FRAC_PI_2).unwrap();
        assert!(kober_to_lens(Complex64::from_polar(1.0, p.alpha), &p).norm() < 1e-15);
        assert_abs_diff_eq!((kober_to_lens(c(1.0, 0.0), &p) + 1.0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((kober_to_lens(c(-1.0, 0.0), &p) - (2f64.sqrt() - 1.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_examples() {
        let p = ArcMapParams::new(FRAC_PI_2).unwrap();
        assert!(phi_one(c(0.0, 0.0), &p).norm() < 1e-15);
        let corner = phi_one(Complex64::from_polar(1.0, p.alpha), &p);
        assert_abs_diff_eq!((corner - Complex64::from_polar(1.0, p.beta)).norm(), 0.0, epsilon = 1e-15);
        let lower = phi_one(Complex64::from_polar(1.0, -p.alpha), &p);
        assert_abs_diff_eq!((lower - Complex64::from_polar(1.0, -p.beta)).norm(), 0.0, epsilon = 1e-15);
        let one = phi_one(c(1.0, 0.0), &p);
        assert_abs_diff_eq!((one - (1.0 - p.r) / p.r).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((one - (2f64.sqrt() - 1.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn anchors_on_alpha_grid() {
        for i in 1..=50 {
            let alpha = PI * i as f64 / 51.0;
            let p = ArcMapParams::new(alpha).unwrap();
            assert!(phi_one(c(0.0, 0.0), &p).norm() <= 1e-12);
            assert!((phi_one(c(-1.0, 0.0), &p) + 1.0).norm() <= 1e-12);
            for s in [1.0, -1.0] {
                let w = phi_one(Complex64::from_polar(1.0, s * alpha), &p);
                assert!((w - Complex64::from_polar(1.0, s * p.beta)).norm() <= 1e-12, "α={alpha} s={s} w={w}");
            }
        }
    }

    #[test]
    fn derivative_at_origin_matches_difference_quotient() {
        for alpha in [0.3, 1.2, 2.8] {
            let p = ArcMapParams::new(alpha).unwrap();
            let h = 1e-5;
            let fd = (phi_one(c(h, 0.0), &p) - phi_one(c(-h, 0.0), &p)) / (2.0 * h);
            assert_abs_diff_eq!(fd.re, p.derivative_at_origin(), epsilon = 1e-8);
            assert!(fd.im.abs() < 1e-8);
        }
    }

    #[test]
    fn minimizer_examples() {
        let p = ArcMapParams::new(1.0).unwrap();
        let m0 = minimizer(c(0.0, 0.0), &p);
        assert!(m0.re.is_finite() && m0.im == 0.0);
        assert_abs_diff_eq!((minimizer(c(1e-6, 0.0), &p) - m0).norm(), 0.0, epsilon = 1e-5);
        // Φ(−1) = −1, so the quotient is +r
        assert_abs_diff_eq!((minimizer(c(-1.0, 0.0), &p) - p.r).norm(), 0.0, epsilon = 1e-12);
        for t in [1.5, 2.5, 3.0, -2.0] {
            let m = minimizer(Complex64::from_polar(1.0, t), &p);
            assert_abs_diff_eq!(m.norm(), p.r, epsilon = 1e-12);
        }
    }

    #[test]
    fn defect_examples() {
        assert!(unimodular_defect(FRAC_PI_2, 4096, 1e-3).unwrap() < 1e-8);
        let coarse = unimodular_defect(0.7, 64, 1e-3).unwrap();
        let fine = unimodular_defect(0.7, 4096, 1e-3).unwrap();
        assert!(coarse < 1e-10 && fine < 1e-10);
        let inside = unimodular_defect_on(FRAC_PI_2, 4096, 1e-3, BoundaryRegion::InsideArc).unwrap();
        assert!(inside < 1e-8);
        assert!(unimodular_defect(1.0, 8, 1e-3).is_err());
        assert!(unimodular_defect(1.0, 64, 0.0).is_err());
    }

    #[test]
    fn domain_examples() {
        let spec = DomainSpec::new(1, 0.5f64.sqrt()).unwrap();
        assert!(in_domain(c(0.0, 0.0), &spec));
        assert!(!in_domain(c((1.0 - spec.r) / spec.r + 1e-9, 0.0), &spec));
        assert!(in_domain(c(-0.9, 0.0), &spec));
        assert!(!in_domain(c(1.0, 0.0), &spec));
        assert!(DomainSpec::new(0, 0.7).is_err());
        assert!(DomainSpec::new(1, 1.0).is_err());
    }

    #[test]
    fn single_fraction_matches_composition_away_from_fold() {
        let p = ArcMapParams::new(FRAC_PI_2).unwrap();
        let mut agree = 0;
        let mut differ = 0;
        for i in 0..40 {
            for j in 0..40 {
                let z = c(-0.95 + 1.9 * i as f64 / 39.0, -0.95 + 1.9 * j as f64 / 39.0);
                if z.norm() >= 0.99 {
                    continue;
                }
                let zeta = mobius_to_halfplane(z, p.alpha).unwrap();
                let gap = (phi_one(z, &p) - phi_one_single_fraction(z, &p)).norm();
                if zeta.arg() + p.alpha < PI - 1e-9 {
                    assert!(gap < 1e-12);
                    agree += 1;
                } else if zeta.arg() + p.alpha > PI + 1e-9 {
                    assert!(gap > 1e-3);
                    differ += 1;
                }
            }
        }
        assert!(agree > 0 && differ > 0);
    }

    #[test]
    fn boundary_samples_shape() {
        let s = boundary_samples(1.0, 32).unwrap();
        assert_eq!(s.len(), 32);
        assert!(s.iter().filter(|b| angular_distance(b.t, 1.0) > 0.05 && angular_distance(b.t, -1.0) > 0.05).all(|b| b.defect.abs() < 1e-10));
    }

    #[test]
    fn r_general_attaches_closed_form() {
        let r = r_general(FRAC_PI_2, 1, &[256, 1024, 4096], 1e-10).unwrap();
        assert_abs_diff_eq!(r.exact().unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(r.deviation.unwrap() < 1e-2);
        let r2 = r_general(FRAC_PI_2, 2, &[256, 1024], 1e-10).unwrap();
        assert!(r2.exact().is_none());
        assert!(r2.best_lower > 0.5f64.sqrt() && r2.best_upper == 1.0);
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(alpha in 0.05..3.0f64, x in -0.99..0.99f64, y in -0.99..0.99f64) {
            prop_assume!(x * x + y * y < 0.98);
            let p = ArcMapParams::new(alpha).unwrap();
            let z = c(x, y);
            prop_assert!((phi_one(z.conj(), &p) - phi_one(z, &p).conj()).norm() <= 1e-12);
        }

        #[test]
        fn image_in_domain(alpha in 0.05..3.0f64, rad in 0.0..0.999f64, t in 0.0..TAU) {
            let p = ArcMapParams::new(alpha).unwrap();
            let spec = DomainSpec::new(1, p.r).unwrap();
            let w = phi_one(Complex64::from_polar(rad, t), &p);
            prop_assert!(in_domain(w, &spec));
        }

        #[test]
        fn boundary_dichotomy(alpha in 0.05..3.0f64, t in 0.0..TAU) {
            let p = ArcMapParams::new(alpha).unwrap();
            prop_assume!(angular_distance(t, alpha) > 1e-3 && angular_distance(t, -alpha) > 1e-3);
            let w = phi_one(Complex64::from_polar(1.0, t), &p);
            if angular_distance(t, 0.0) < alpha {
                prop_assert!(((p.r * w - 1.0).norm() - p.r).abs() <= 1e-10);
            } else {
                prop_assert!((w.norm() - 1.0).abs() <= 1e-10);
            }
        }
    }
}
