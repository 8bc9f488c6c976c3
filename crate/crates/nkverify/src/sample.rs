//! Monte-Carlo sampling of a single identity.

use crate::config::RunConfig;
use crate::immersion::{self, Outcome, IMMERSION_CHECKS};
use crate::report::{CheckRecord, Summary, VerificationReport};
use crate::structure_suite::{structure_samples, structure_tolerance, STRUCTURE_CHECKS};
use crate::VerifyError;

/// Immersion used by point checks when none is given.
pub const DEFAULT_IMMERSION: &str = "f7";

/// Every id accepted by [`sample`]: structure checks, then point checks.
pub fn available_checks() -> Vec<&'static str> {
    STRUCTURE_CHECKS
        .iter()
        .map(|c| c.id)
        .chain(IMMERSION_CHECKS.iter().map(|c| c.id))
        .collect()
}

/// Runs check `id` on `cfg.samples` draws and reports the residual
/// distribution. Point checks evaluate on `immersion` (default `f7`).
pub fn sample(cfg: &RunConfig, id: &str, immersion: Option<&str>) -> Result<VerificationReport, VerifyError> {
    let start = std::time::Instant::now();
    let (record, values) = if let Some(k) = STRUCTURE_CHECKS.iter().position(|c| c.id == id) {
        let table = structure_samples(cfg)?;
        let def = &STRUCTURE_CHECKS[k];
        let values = table.into_iter().nth(k).unwrap_or_default();
        let max = values.iter().copied().fold(0.0f64, f64::max);
        (CheckRecord::new(def.id, def.anchor, max, structure_tolerance(cfg)), values)
    } else if let Some(k) = IMMERSION_CHECKS.iter().position(|c| c.id == id) {
        let def = &IMMERSION_CHECKS[k];
        let (imm, _) = immersion::load(immersion.unwrap_or(DEFAULT_IMMERSION))?;
        let outcomes = immersion::evaluate_points(&imm, cfg)?;
        let tol = match def.tol {
            immersion::Tol::Algebraic => cfg.tol_algebraic,
            immersion::Tol::Fd => cfg.tol_fd,
        };
        let mut values = Vec::new();
        let mut failure = None;
        for o in &outcomes {
            match o {
                Outcome::Analyzed(p) => match &p.checks[k] {
                    Ok(Some(v)) => values.push(*v),
                    Ok(None) => {}
                    Err(e) => {
                        failure.get_or_insert_with(|| e.clone());
                    }
                },
                Outcome::NotLagrangian(d) if k == 0 => values.push(*d),
                Outcome::NotLagrangian(d) => {
                    failure.get_or_insert_with(|| format!("point is not Lagrangian (deviation {d:e})"));
                }
                Outcome::Failed(e) => {
                    failure.get_or_insert_with(|| e.clone());
                }
            }
        }
        let record = match failure {
            Some(e) => CheckRecord::failed(def.id, def.anchor, tol, e),
            None if values.is_empty() => CheckRecord::skipped(def.id, def.anchor, tol, "not applicable at any point"),
            None => {
                let max = values.iter().copied().fold(0.0f64, f64::max);
                CheckRecord::new(def.id, def.anchor, max, tol)
            }
        };
        (record, values)
    } else {
        return Err(VerifyError::Input(format!(
            "unknown check `{id}`; available: {}",
            available_checks().join(", ")
        )));
    };
    let mut report = VerificationReport::new(format!("sample:{id}"), cfg, cfg.samples);
    report.checks.push(record);
    if let Some(s) = Summary::of(&values) {
        report.observations.insert("residual".into(), s);
    }
    crate::stamp(&mut report, cfg, start);
    Ok(report)
}
