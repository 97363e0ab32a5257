//! Fixed quadrature rules on finite intervals.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Order of the composite Gauss–Legendre rule.
pub const GAUSS_ORDER: usize = 10;

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

fn gauss_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_ORDER))
}

/// Gauss–Legendre approximation of `∫_a^b f`.
pub fn gauss<T, F>(f: &F, a: f64, b: f64) -> T
where
    T: Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    gauss_rule()
        .iter()
        .fold(T::default(), |acc, &(x, w)| acc + f(mid + half * x) * (w * half))
}

/// Tanh–sinh approximation of `∫_a^b f` for integrands with endpoint
/// singularities. Abscissae are formed from their distance to the nearer
/// endpoint so that points crowding an endpoint stay distinct.
pub fn tanh_sinh<T, F>(f: &F, a: f64, b: f64) -> T
where
    T: Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    const STEP: f64 = 1.0 / 64.0;
    const LEVELS: i32 = 256;
    let len = b - a;
    let mut acc = T::default();
    for i in -LEVELS..=LEVELS {
        let tau = i as f64 * STEP;
        let u = 0.5 * PI * tau.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance from the nearer endpoint, as a fraction of the length
        let frac = e / (1.0 + e);
        let dist = len * frac;
        if dist <= 0.0 || dist < 1e-300 {
            continue;
        }
        let x = if i >= 0 { b - dist } else { a + dist };
        if x <= a || x >= b {
            continue;
        }
        let w = STEP * len * PI * tau.cosh() * frac / (1.0 + e);
        acc = acc + f(x) * w;
    }
    acc
}
