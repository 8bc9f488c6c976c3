//! Acceptance criteria, one line each. Exits nonzero if any fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nk_core::classify::depressed_cubic_roots;
use nk_core::dsl::catalog;
use nk_core::lagrangian::{angle_relations_check, Analyzer, PointGeometry};
use nkverify::par::point_rng;
use nkverify::{run_classify, run_immersion_report, run_structure_suite, sample, Backend, RunConfig, VerificationReport};
use rand::Rng;

const SEED: u64 = 20_240_601;
const CATALOG: [&str; 8] = ["f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cfg(samples: usize) -> RunConfig {
    RunConfig {
        seed: SEED,
        samples,
        timing: false,
        ..RunConfig::default()
    }
}

fn residual(r: &VerificationReport, id: &str) -> f64 {
    r.check(id)
        .and_then(|c| c.residual)
        .unwrap_or_else(|| panic!("{}: no residual for `{id}`", r.suite))
}

fn obs(r: &VerificationReport, name: &str) -> nkverify::Summary {
    *r.observations
        .get(name)
        .unwrap_or_else(|| panic!("{}: no observation `{name}`", r.suite))
}

fn flag(r: &VerificationReport, name: &str) -> bool {
    r.flags.get(name).copied().unwrap_or(false)
}

/// Seeded chart points inside the sampling box.
fn chart_points(n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|i| {
            let mut rng = point_rng(SEED ^ 0x5eed, i as u64);
            core::array::from_fn(|_| rng.gen_range(-0.4..=0.4))
        })
        .collect()
}

fn structure_identities() -> Outcome {
    let ids = ["g-skew", "g-j", "g-metric-skew", "nabla-p", "nabla-pj", "nearly-kaehler"];
    let float = run_structure_suite(&cfg(10_000)).unwrap();
    let exact = run_structure_suite(&RunConfig {
        backend: Backend::Exact,
        ..cfg(200)
    })
    .unwrap();
    let fmax = ids.iter().map(|id| residual(&float, id)).fold(0.0, f64::max);
    let emax = ids.iter().map(|id| residual(&exact, id)).fold(0.0, f64::max);
    outcome(
        fmax < 1e-10 && emax == 0.0,
        format!("float max {fmax:e} over 10^4 tuples, exact max {emax:e} over 200 rational tuples"),
    )
}

fn curvature_cross_check() -> Outcome {
    let r = run_structure_suite(&cfg(1000)).unwrap();
    let c = residual(&r, "curvature");
    outcome(c < 1e-10, format!("closed form vs connection {c:e} over 10^3 triples"))
}

fn curvature_split(reports: &BTreeMap<&str, VerificationReport>) -> Outcome {
    let r = run_structure_suite(&cfg(10_000)).unwrap();
    let nabla_g = residual(&r, "nabla-g");
    let mut kept: f64 = 0.0;
    let mut rejected = f64::INFINITY;
    for name in ["f7", "f8"] {
        kept = kept.max(residual(&reports[name], "normal-curvature"));
        rejected = rejected.min(obs(&reports[name], "curvature_variant_residual").min);
    }
    outcome(
        nabla_g < 1e-10 && kept < 1e-6 && rejected > 1e-3,
        format!("∇̃G formula {nabla_g:e}; curvature split g(Y,W) reading {kept:e}, g(X,W) reading ≥ {rejected:e}"),
    )
}

fn catalog_lagrangian(reports: &BTreeMap<&str, VerificationReport>) -> Outcome {
    let mut ok = true;
    let mut worst_geodesic: f64 = 0.0;
    let mut least_h = f64::INFINITY;
    for name in CATALOG {
        let r = &reports[name];
        ok &= r.check("lagrangian").is_some_and(|c| c.pass) && flag(r, "lagrangian");
        let h = obs(r, "h_max");
        if name == "f7" || name == "f8" {
            ok &= !flag(r, "totally_geodesic");
            least_h = least_h.min(h.min);
        } else {
            ok &= flag(r, "totally_geodesic");
            worst_geodesic = worst_geodesic.max(h.max);
        }
    }
    outcome(
        ok && worst_geodesic < 1e-7,
        format!("50 points each; f1–f6 max ‖h‖ {worst_geodesic:e}; f7, f8 min ‖h‖ {least_h:e}"),
    )
}

fn catalog_values(reports: &BTreeMap<&str, VerificationReport>) -> Outcome {
    let mut worst: f64 = 0.0;
    for name in ["f7", "f8"] {
        for id in ["expect-h", "expect-omega", "expect-angles"] {
            worst = worst.max(residual(&reports[name], id));
        }
    }
    let h7 = obs(&reports["f7"], "h123").median;
    let h8 = obs(&reports["f8"], "h123").median;
    outcome(
        worst < 1e-6,
        format!("h₁₂³ = {h7:.12} and {h8:.12}; worst deviation in h, ω, θ {worst:e}"),
    )
}

fn sectional_curvature(reports: &BTreeMap<&str, VerificationReport>) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut closure: f64 = 0.0;
    let mut planes = usize::MAX;
    for name in ["f7", "f8"] {
        worst = worst.max(residual(&reports[name], "expect-curvature"));
        closure = closure.max(residual(&reports[name], "expect-gauss-closure"));
        planes = planes.min(obs(&reports[name], "sectional_curvature").count);
    }
    let k7 = obs(&reports["f7"], "sectional_curvature").median;
    let k8 = obs(&reports["f8"], "sectional_curvature").median;
    outcome(
        worst < 1e-6 && closure < 1e-9 && planes >= 100,
        format!("K = {k7:.12} (f7), {k8:.1e} (f8) on {planes} planes, max deviation {worst:e}; 1/4 − x² closure {closure:e}"),
    )
}

fn j_isotropy(reports: &BTreeMap<&str, VerificationReport>) -> Outcome {
    let mut ok = true;
    let mut worst_lambda: f64 = 0.0;
    for name in CATALOG {
        let r = &reports[name];
        ok &= flag(r, "j_isotropic");
        let l = obs(r, "lambda");
        ok &= l.count == r.env.samples;
        worst_lambda = worst_lambda.max(l.min.abs()).max(l.max.abs());
    }
    let an = Analyzer::new();
    let tuples = PointGeometry::default_polarized_tuples();
    let mut polarized: f64 = 0.0;
    for name in ["f7", "f8"] {
        let imm = catalog(name).unwrap();
        for x in chart_points(10) {
            let pg = an.analyze(&imm, x).unwrap();
            polarized = polarized.max(pg.polarized_residual(0.0, &tuples));
        }
    }
    outcome(
        ok && worst_lambda < 1e-6 && polarized < 1e-6,
        format!("max |λ| {worst_lambda:e} over {} directions per point; polarized with λ = 0 {polarized:e}", nkverify::immersion::SPHERE_SAMPLES),
    )
}

fn second_order(reports: &BTreeMap<&str, VerificationReport>) -> Outcome {
    let mut full: f64 = 0.0;
    let mut reduced: f64 = 0.0;
    for name in ["f7", "f8"] {
        full = full.max(residual(&reports[name], "second-order"));
        reduced = reduced.max(residual(&reports[name], "i-reduction"));
    }
    outcome(
        full < 1e-5 && reduced < 1e-6,
        format!("identity on all frame 5-tuples {full:e}; 𝐈 reduction {reduced:e}"),
    )
}

fn isotropy(reports: &BTreeMap<&str, VerificationReport>) -> Outcome {
    let mut ok = true;
    let mut mu: f64 = 0.0;
    let mut spread = f64::INFINITY;
    for name in CATALOG {
        let r = &reports[name];
        if name == "f7" || name == "f8" {
            ok &= !flag(r, "isotropic") && !r.observations.contains_key("mu");
            spread = spread.min(obs(r, "mu_spread").min);
        } else {
            ok &= flag(r, "isotropic");
            mu = mu.max(obs(r, "mu").max.abs());
        }
    }
    outcome(
        ok && mu < 1e-12 && spread > 1e-6,
        format!("f1–f6 μ ≤ {mu:e}; f7, f8 spread of |h(v,v)|² ≥ {spread:e}"),
    )
}

fn classification() -> Outcome {
    let r = run_classify(&cfg(1)).unwrap();
    let exact = depressed_cubic_roots(32, -6, 1);
    let roots_ok = r.roots.len() == 2
        && (r.roots[0].value + 0.5).abs() < 1e-15
        && r.roots[0].multiplicity == 1
        && (r.roots[1].value - 0.25).abs() < 1e-15
        && r.roots[1].multiplicity == 2
        && exact.len() == 2;
    let residual = r.roots.iter().map(|x| x.residual).fold(0.0, f64::max);
    let curv_ok = r.roots[0].curvature.abs() < 1e-15 && (r.roots[1].curvature - 3.0 / 16.0).abs() < 1e-15;
    let tri = angle_relations_check([0.0, PI / 3.0, 2.0 * PI / 3.0], 0.0).max();
    let mut sum: f64 = 0.0;
    for i in 0..1000 {
        let mut rng = point_rng(SEED, i);
        let t: [f64; 3] = core::array::from_fn(|_| rng.gen_range(-PI..PI));
        sum = sum.max(angle_relations_check(t, 0.0).sum.abs());
    }
    outcome(
        roots_ok && residual < 1e-14 && curv_ok && tri < 1e-12 && sum < 1e-14,
        format!(
            "roots −1/2 (simple), 1/4 (double), residual {residual:e}, curvatures 0 and 3/16; \
             λ = 0 at (0, π/3, 2π/3) to {tri:e}; cyclic sum ≤ {sum:e} over 10^3 triples"
        ),
    )
}

fn codazzi_and_angles(reports: &BTreeMap<&str, VerificationReport>) -> Outcome {
    let mut identities: f64 = 0.0;
    let mut angles: f64 = 0.0;
    for name in ["f7", "f8"] {
        for id in ["codazzi", "nabla-h-skew"] {
            identities = identities.max(residual(&reports[name], id));
        }
        for id in ["angle-sum", "angle-derivative", "angle-coupling"] {
            angles = angles.max(residual(&reports[name], id));
        }
    }
    outcome(
        identities < 1e-6 && angles < 1e-6,
        format!("Codazzi and ∇h skew part {identities:e}; angle relations {angles:e}"),
    )
}

fn determinism() -> Outcome {
    let with_threads = |n: usize| RunConfig {
        threads: Some(n),
        ..cfg(0)
    };
    let runs = |threads: usize| -> Vec<String> {
        let base = with_threads(threads);
        vec![
            run_structure_suite(&RunConfig { samples: 3000, ..base.clone() }).unwrap().to_json(),
            run_structure_suite(&RunConfig {
                samples: 40,
                backend: Backend::Exact,
                ..base.clone()
            })
            .unwrap()
            .to_json(),
            run_immersion_report("f7", &RunConfig { samples: 12, ..base.clone() }).unwrap().to_json(),
            sample(&RunConfig { samples: 12, ..base.clone() }, "angle-coupling", Some("f8"))
                .unwrap()
                .to_json(),
        ]
    };
    let one = runs(1);
    let four = runs(4);
    let again = runs(4);
    let roundtrip = one
        .iter()
        .all(|j| VerificationReport::from_json(j).is_ok_and(|r| r.to_json() == *j));
    outcome(
        one == four && four == again && roundtrip,
        format!("{} reports byte-identical across 1 and 4 threads and reruns; JSON round-trips", one.len()),
    )
}

fn main() {
    let reports: BTreeMap<&str, VerificationReport> = CATALOG
        .iter()
        .map(|&n| (n, run_immersion_report(n, &cfg(50)).unwrap()))
        .collect();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("structure identities", structure_identities()),
        ("curvature cross-check", curvature_cross_check()),
        ("∇̃G formula and curvature split reading", curvature_split(&reports)),
        ("catalog is Lagrangian, f1–f6 totally geodesic", catalog_lagrangian(&reports)),
        ("f7, f8 second fundamental form, connection, angles", catalog_values(&reports)),
        ("constant sectional curvature", sectional_curvature(&reports)),
        ("J-isotropy constant vanishes", j_isotropy(&reports)),
        ("second-order J-isotropy identity", second_order(&reports)),
        ("isotropy exactly on f1–f6", isotropy(&reports)),
        ("classification arithmetic", classification()),
        ("Codazzi and angle relations", codazzi_and_angles(&reports)),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (n, (name, o)) in criteria.iter().enumerate() {
        println!(
            "criterion {:>2} {}: {name}: {}",
            n + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
