use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::config::{Backend, RunConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity being checked, written out.
    pub anchor: String,
    /// Maximum over all evaluated inputs; absent when skipped.
    pub residual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(id: &str, anchor: &str, residual: f64, tol: f64) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            residual: Some(residual),
            tol,
            // NaN fails
            pass: residual <= tol,
            skipped: false,
            note: None,
        }
    }

    pub fn skipped(id: &str, anchor: &str, tol: f64, note: &str) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            residual: None,
            tol,
            pass: true,
            skipped: true,
            note: Some(note.into()),
        }
    }

    pub fn failed(id: &str, anchor: &str, tol: f64, note: String) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            residual: None,
            tol,
            pass: false,
            skipped: false,
            note: Some(note),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub seed: u64,
    pub samples: usize,
    pub backend: Backend,
}

/// Order statistics of a sampled quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub count: usize,
}

impl Summary {
    /// `None` for an empty sample. NaNs sort last.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
        Some(Self {
            min: v[0],
            median,
            max: v[n - 1],
            count: n,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootEntry {
    pub value: f64,
    pub multiplicity: u8,
    pub residual: f64,
    pub curvature: f64,
    pub immersions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    pub env: Environment,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observations: BTreeMap<String, Summary>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<RootEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, cfg: &RunConfig, samples: usize) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
            env: Environment {
                seed: cfg.seed,
                samples,
                backend: cfg.backend,
            },
            observations: BTreeMap::new(),
            flags: BTreeMap::new(),
            roots: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report contains only finite-or-null numbers")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "suite {}  seed {}  samples {}  backend {}",
            self.suite, self.env.seed, self.env.samples, self.env.backend
        );
        for c in &self.checks {
            let status = match (c.skipped, c.pass) {
                (true, _) => "SKIP",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            let residual = c.residual.map_or_else(|| "-".to_string(), |r| format!("{r:e}"));
            let _ = write!(s, "{status}  {:<24} residual {residual:<24} tol {:e}  {}", c.id, c.tol, c.anchor);
            if let Some(n) = &c.note {
                let _ = write!(s, "  ({n})");
            }
            s.push('\n');
        }
        for (k, v) in &self.observations {
            let _ = writeln!(s, "obs   {k:<24} min {:e}  median {:e}  max {:e}  n {}", v.min, v.median, v.max, v.count);
        }
        for (k, v) in &self.flags {
            let _ = writeln!(s, "flag  {k:<24} {v}");
        }
        for r in &self.roots {
            let _ = writeln!(
                s,
                "root  {:e} (multiplicity {})  residual {:e}  curvature {:e}  immersions [{}]",
                r.value,
                r.multiplicity,
                r.residual,
                r.curvature,
                r.immersions.join(", ")
            );
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed {ms} ms");
        }
        let _ = writeln!(s, "{}", if self.passed() { "ALL PASS" } else { "FAILURES" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd_samples() {
        let s = Summary::of(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!((s.min, s.median, s.max), (1.0, 2.0, 3.0));
        assert_eq!(Summary::of(&[4.0, 1.0, 2.0, 3.0]).unwrap().median, 2.5);
        assert!(Summary::of(&[]).is_none());
    }

    #[test]
    fn nan_residual_fails() {
        assert!(!CheckRecord::new("x", "x", f64::NAN, 1.0).pass);
    }
}
