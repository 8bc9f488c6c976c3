//! Verification reports for the nearly Kähler S³×S³ library: structure
//! identities, per-immersion geometry, the classification cubic and
//! targeted sampling of single identities.

pub mod classify;
pub mod config;
pub mod immersion;
pub mod par;
pub mod report;
pub mod sample;
pub mod structure_suite;

pub use classify::run_classify;
pub use config::{Backend, Format, RunConfig};
pub use immersion::run_immersion_report;
pub use report::{CheckRecord, Summary, VerificationReport};
pub use sample::{available_checks, sample};
pub use structure_suite::run_structure_suite;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] nk_core::Error),
}

impl VerifyError {
    /// Process exit status: every error here is an input or config problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Exit status for a finished report.
pub fn report_exit_code(r: &VerificationReport) -> i32 {
    if r.passed() {
        0
    } else {
        1
    }
}

fn stamp(report: &mut VerificationReport, cfg: &RunConfig, start: std::time::Instant) {
    if cfg.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
}
