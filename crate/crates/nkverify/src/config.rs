use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::VerifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// ℚ(√3) arithmetic on rational inputs.
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

impl FromStr for Backend {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(VerifyError::Config(format!("unknown backend `{s}` (expected exact or float)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(VerifyError::Config(format!("unknown format `{s}` (expected text or json)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    /// Tolerance for identities evaluated in closed form.
    pub tol_algebraic: f64,
    /// Tolerance for quantities that pass through differentiation of a
    /// chart or a frame.
    pub tol_fd: f64,
    pub backend: Backend,
    pub format: Format,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    /// Include wall time in the report.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 1000,
            tol_algebraic: 1e-10,
            tol_fd: 1e-6,
            backend: Backend::Float,
            format: Format::Text,
            threads: None,
            timing: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.samples == 0 {
            return Err(VerifyError::Config("sample count must be positive".into()));
        }
        for (name, t) in [("algebraic", self.tol_algebraic), ("finite-difference", self.tol_fd)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(VerifyError::Config(format!("{name} tolerance must be positive, got {t}")));
            }
        }
        if self.threads == Some(0) {
            return Err(VerifyError::Config("thread count must be positive".into()));
        }
        Ok(())
    }

    /// `NKVERIFY_THREADS`, when set, caps parallelism.
    pub fn with_env_threads(mut self) -> Result<Self, VerifyError> {
        if let Ok(v) = std::env::var("NKVERIFY_THREADS") {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| VerifyError::Config(format!("NKVERIFY_THREADS must be a positive integer, got `{v}`")))?;
            self.threads = Some(n);
        }
        Ok(self)
    }
}
