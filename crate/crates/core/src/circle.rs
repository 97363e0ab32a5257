//! Finite unions of arcs on the unit circle.
//!
//! An [`ArcSet`] stores its arcs as canonical `(start, end)` pairs with both
//! angles in `[0, 2π)`. An arc with `end < start` wraps through angle zero and
//! an arc with `end == start` is the whole circle. Arcs are half-open,
//! `[start, end)`, which only matters for grid sampling.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maps an angle into `[0, 2π)`.
pub fn canonical_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A single counterclockwise arc `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: f64,
    end: f64,
}

impl Arc {
    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn length(&self) -> f64 {
        if self.end > self.start {
            self.end - self.start
        } else {
            self.end - self.start + TAU
        }
    }

    pub fn midpoint(&self) -> f64 {
        self.start + 0.5 * self.length()
    }

    /// End angle unwrapped so that it lies in `(start, start + 2π]`.
    pub fn unwrapped_end(&self) -> f64 {
        if self.end > self.start {
            self.end
        } else {
            self.end + TAU
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        (t - self.start).rem_euclid(TAU) < self.length()
    }
}

/// One Fourier coefficient `f̂(index)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient {
    pub index: i64,
    pub value: Complex64,
}

/// A normalized finite union of arcs: pairwise disjoint, sorted by start.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

// Working interval on the real line: start in [0, 2π), end unwrapped.
#[derive(Clone, Copy)]
struct Span {
    start: f64,
    end: f64,
    end_canonical: f64,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet {
            arcs: vec![Arc {
                start: 0.0,
                end: 0.0,
            }],
        }
    }

    /// Single arc from `start` counterclockwise to `end`.
    pub fn arc(start: f64, end: f64) -> Result<Self> {
        Self::normalize(&[(start, end)])
    }

    /// The arc `(-α, α)` symmetric about angle zero.
    pub fn centered_arc(half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width <= PI) {
            return Err(Error::InvalidArgument(format!(
                "half-width {half_width} outside (0, π]"
            )));
        }
        Self::normalize(&[(-half_width, half_width)])
    }

    /// Builds a normalized set from raw `(start, end)` pairs.
    ///
    /// A pair with `end > start` has length `end - start`, which must not
    /// exceed `2π`; a pair with `end < start` wraps through zero. Overlapping
    /// and exactly touching arcs are merged.
    pub fn normalize(raw: &[(f64, f64)]) -> Result<Self> {
        let mut spans = Vec::with_capacity(raw.len());
        for &(start, end) in raw {
            if !start.is_finite() || !end.is_finite() {
                return Err(Error::NonFiniteAngle);
            }
            if start == end {
                return Err(Error::EmptyArc { start, end });
            }
            let raw_len = end - start;
            if raw_len > TAU || raw_len <= -TAU {
                return Err(Error::ArcTooLong { start, end });
            }
            if raw_len == TAU {
                return Ok(Self::full());
            }
            let s = canonical_angle(start);
            let e = canonical_angle(end);
            if s == e {
                // rounding collapsed the endpoints
                if raw_len.rem_euclid(TAU) > PI {
                    return Ok(Self::full());
                }
                return Err(Error::EmptyArc { start, end });
            }
            let unwrapped = if e > s { e } else { e + TAU };
            spans.push(Span {
                start: s,
                end: unwrapped,
                end_canonical: e,
            });
        }
        Ok(Self::from_spans(spans))
    }

    fn from_spans(mut spans: Vec<Span>) -> Self {
        if spans.is_empty() {
            return Self::empty();
        }
        spans.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut merged: Vec<Span> = Vec::with_capacity(spans.len());
        for span in spans {
            match merged.last_mut() {
                Some(cur) if span.start <= cur.end => {
                    if span.end > cur.end {
                        cur.end = span.end;
                        cur.end_canonical = span.end_canonical;
                    }
                }
                _ => merged.push(span),
            }
        }
        // The last span may run past 2π into the first ones.
        while merged.len() > 1 {
            let first = merged[0];
            let last = merged.last_mut().unwrap();
            if last.end - TAU >= first.start {
                if first.end + TAU > last.end {
                    last.end = first.end + TAU;
                    last.end_canonical = first.end_canonical;
                }
                merged.remove(0);
            } else {
                break;
            }
        }
        if merged.iter().any(|s| s.end - s.start >= TAU) {
            return Self::full();
        }
        let mut arcs: Vec<Arc> = merged
            .into_iter()
            .map(|s| Arc {
                start: s.start,
                end: s.end_canonical,
            })
            .collect();
        arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
        ArcSet { arcs }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].start == self.arcs[0].end
    }

    /// Lebesgue measure `|E|` in radians.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(t))
    }

    /// Endpoints of all arcs (empty for the empty set and the full circle).
    pub fn boundary_points(&self) -> Vec<f64> {
        if self.is_full() {
            return Vec::new();
        }
        let mut pts: Vec<f64> = self.arcs.iter().flat_map(|a| [a.start, a.end]).collect();
        pts.sort_by(f64::total_cmp);
        pts
    }

    /// Angular distance from `t` to the nearest endpoint, `+∞` if there is none.
    pub fn distance_to_boundary(&self, t: f64) -> f64 {
        self.boundary_points()
            .into_iter()
            .map(|p| {
                let d = (t - p).rem_euclid(TAU);
                d.min(TAU - d)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn rotate(&self, theta: f64) -> Self {
        if self.is_full() || self.is_empty() {
            return self.clone();
        }
        let mut arcs: Vec<Arc> = self
            .arcs
            .iter()
            .map(|a| Arc {
                start: canonical_angle(a.start + theta),
                end: canonical_angle(a.end + theta),
            })
            .collect();
        arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
        ArcSet { arcs }
    }

    /// Image under complex conjugation `e^{it} ↦ e^{-it}`.
    pub fn reflect(&self) -> Self {
        if self.is_full() || self.is_empty() {
            return self.clone();
        }
        let mut arcs: Vec<Arc> = self
            .arcs
            .iter()
            .map(|a| Arc {
                start: canonical_angle(-a.end),
                end: canonical_angle(-a.start),
            })
            .collect();
        arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
        ArcSet { arcs }
    }

    pub fn complement(&self) -> Self {
        if self.is_empty() {
            return Self::full();
        }
        if self.is_full() {
            return Self::empty();
        }
        let n = self.arcs.len();
        let mut arcs: Vec<Arc> = (0..n)
            .map(|i| Arc {
                start: self.arcs[i].end,
                end: self.arcs[(i + 1) % n].start,
            })
            .collect();
        arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
        ArcSet { arcs }
    }

    /// Fourier coefficient `χ̂_E(k) = (1/2π) ∫_E e^{-ikt} dt`.
    ///
    /// Each arc with midpoint `c` and length `L` contributes
    /// `e^{-ikc} sin(kL/2) / (πk)`.
    pub fn indicator_fourier(&self, k: i64) -> Complex64 {
        if k == 0 {
            return Complex64::new(self.measure() / TAU, 0.0);
        }
        if self.is_full() {
            return Complex64::new(0.0, 0.0);
        }
        let kf = k as f64;
        self.arcs
            .iter()
            .map(|a| {
                let len = a.length();
                let amp = (0.5 * kf * len).sin() / (PI * kf);
                Complex64::from_polar(amp, -kf * a.midpoint())
            })
            .sum()
    }

    pub fn indicator_coefficient(&self, k: i64) -> FourierCoefficient {
        FourierCoefficient {
            index: k,
            value: self.indicator_fourier(k),
        }
    }

    /// Coefficients `c_m = χ̂_E(n - m - 1)` for `m = 0..count`, the
    /// anti-diagonals of the Hankel matrix of `z̄ⁿχ_E`.
    pub fn symbol_coefficients(&self, n: i64, count: usize) -> Vec<Complex64> {
        (0..count)
            .map(|m| self.indicator_fourier(n - m as i64 - 1))
            .collect()
    }

    /// Samples `χ_E(2πj/M)` for `j = 0..M` under the half-open convention.
    pub fn indicator_sample(&self, grid: usize) -> Result<Vec<u8>> {
        if grid == 0 {
            return Err(Error::InvalidArgument("grid size must be positive".into()));
        }
        let step = TAU / grid as f64;
        Ok((0..grid)
            .map(|j| u8::from(self.contains(j as f64 * step)))
            .collect())
    }

    /// Canonical `start:end` text, parseable by [`FromStr`].
    pub fn to_text(&self) -> String {
        if self.is_full() {
            return format!("0:{}", TAU);
        }
        self.arcs
            .iter()
            .map(|a| format!("{}:{}", a.start, a.end))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Pairs as printed by the canonical printer.
    pub fn to_pairs(&self) -> Vec<(f64, f64)> {
        if self.is_full() {
            return vec![(0.0, TAU)];
        }
        self.arcs.iter().map(|a| (a.start, a.end)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_pairs()).expect("pairs serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let pairs: Vec<(f64, f64)> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::normalize(&pairs)
    }
}

/// Parses an angle: a decimal number or a multiple of `pi` such as `pi`,
/// `-pi/2`, `3pi/2` or `0.5pi`.
fn parse_angle(token: &str) -> Result<f64> {
    let t = token.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || Error::Parse(format!("bad angle `{t}`"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(bad)?.trim();
    let c = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * PI / den)
}

impl FromStr for ArcSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            return Self::from_json(s);
        }
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut raw = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected start:end, got `{part}`")))?;
            raw.push((parse_angle(a)?, parse_angle(b)?));
        }
        Self::normalize(&raw)
    }
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for ArcSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArcSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(f64, f64)>::deserialize(d)?;
        ArcSet::normalize(&pairs).map_err(serde::de::Error::custom)
    }
}
