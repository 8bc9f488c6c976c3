use nk_core::classify::{classify, H123_CUBIC};

use crate::config::RunConfig;
use crate::report::{CheckRecord, RootEntry, VerificationReport};
use crate::VerifyError;

/// Substitution residual allowed for a closed-form root.
const ROOT_TOLERANCE: f64 = 1e-14;

/// Roots of `32x³ − 6x + 1`, their curvatures `1/4 − x²` and the catalog
/// entries realizing each.
pub fn run_classify(cfg: &RunConfig) -> Result<VerificationReport, VerifyError> {
    let start = std::time::Instant::now();
    let c = classify()?;
    let mut report = VerificationReport::new("classify", cfg, 1);
    let (a, p, q) = H123_CUBIC;
    let anchor = format!("{a}x³ {} {}x + {q} = 0", if p < 0 { "−" } else { "+" }, p.abs());
    for (n, r) in c.roots.iter().enumerate() {
        report
            .checks
            .push(CheckRecord::new(&format!("root-{}", n + 1), &anchor, r.residual, ROOT_TOLERANCE));
        report
            .flags
            .insert(format!("root-{}-realized", n + 1), !r.immersions.is_empty());
        report.roots.push(RootEntry {
            value: r.root.value,
            multiplicity: r.root.multiplicity,
            residual: r.residual,
            curvature: r.curvature,
            immersions: r.immersions.clone(),
        });
    }
    crate::stamp(&mut report, cfg, start);
    Ok(report)
}
