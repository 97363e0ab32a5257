use serde::{Deserialize, Serialize};

use crate::circle::ArcSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
    /// Non-rigorous extrapolated value; not used for the best bounds.
    Estimate,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Exact => "exact",
            BoundKind::Estimate => "estimate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub value: f64,
    pub kind: BoundKind,
    pub provenance: String,
}

/// Facts about one `Λ_n(E)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub set: ArcSet,
    pub n: i64,
    pub entries: Vec<BoundEntry>,
    pub best_lower: f64,
    pub best_upper: f64,
    pub converged: bool,
    /// Distance between the extrapolated value and a known exact value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Shortest round-trip text for `x`, in exponent form when `|x|` is below
/// `1e-4` or at least `1e15`.
pub fn format_value(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

impl BoundsReport {
    pub fn new(set: ArcSet, n: i64) -> Self {
        BoundsReport {
            set,
            n,
            entries: Vec::new(),
            best_lower: 0.0,
            best_upper: 1.0,
            converged: true,
            deviation: None,
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, value: f64, kind: BoundKind, provenance: impl Into<String>) {
        self.entries.push(BoundEntry {
            value,
            kind,
            provenance: provenance.into(),
        });
        self.refresh();
    }

    /// Recomputes `best_lower` and `best_upper` from the entries.
    pub fn refresh(&mut self) {
        let exact = self
            .entries
            .iter()
            .find(|e| e.kind == BoundKind::Exact)
            .map(|e| e.value);
        if let Some(v) = exact {
            self.best_lower = v;
            self.best_upper = v;
            return;
        }
        self.best_lower = self
            .entries
            .iter()
            .filter(|e| e.kind == BoundKind::Lower)
            .map(|e| e.value)
            .fold(0.0, f64::max);
        self.best_upper = self
            .entries
            .iter()
            .filter(|e| e.kind == BoundKind::Upper)
            .map(|e| e.value)
            .fold(1.0, f64::min);
    }

    pub fn exact(&self) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.kind == BoundKind::Exact)
            .map(|e| e.value)
    }

    pub fn estimate(&self) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.kind == BoundKind::Estimate)
            .map(|e| e.value)
    }

    pub fn lower_values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .filter(|e| e.kind == BoundKind::Lower)
            .map(|e| e.value)
            .collect()
    }

    /// Copy with every number rounded to `digits` significant digits.
    pub fn rounded(&self, digits: usize) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            e.value = round_significant(e.value, digits);
        }
        out.best_lower = round_significant(out.best_lower, digits);
        out.best_upper = round_significant(out.best_upper, digits);
        out.deviation = out.deviation.map(|d| round_significant(d, digits));
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(e.to_string()))
    }

    /// One row per entry: `set,n,value,kind,provenance,best_lower,best_upper`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Numerical(e.to_string());
        w.write_record(["set", "n", "value", "kind", "provenance", "best_lower", "best_upper"])
            .map_err(io)?;
        let set = self.set.to_text();
        for e in &self.entries {
            w.write_record([
                set.as_str(),
                &self.n.to_string(),
                &format_value(e.value),
                e.kind.as_str(),
                &e.provenance,
                &format_value(self.best_lower),
                &format_value(self.best_upper),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
    }
}
