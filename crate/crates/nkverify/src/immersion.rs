//! Per-immersion geometry report over seeded chart points.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nk_core::dsl::{catalog_source, parse, ImmersionDescriptor};
use nk_core::lagrangian::frame::angle_distance;
use nk_core::lagrangian::{levi_civita_symbol, Analyzer, NablaHPath, PointGeometry, T3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Backend, RunConfig};
use crate::par::{par_map, point_rng};
use crate::report::{CheckRecord, Summary, VerificationReport};
use crate::VerifyError;

/// Chart points are drawn uniformly from `[−CHART_BOX, CHART_BOX]³`.
pub const CHART_BOX: f64 = 0.4;
/// Unit directions for the isotropy tests: Fibonacci lattice size.
pub const SPHERE_SAMPLES: usize = 512;
/// Spread below which `|h(v,v)|²` or `g((∇h)(v,v,v),Jv)` counts as constant.
pub const CONSTANCY_TOLERANCE: f64 = 1e-6;
/// `max |h|` below which a point is totally geodesic.
pub const GEODESIC_TOLERANCE: f64 = 1e-7;
/// Random tangent planes per point for the sectional curvature.
pub const PLANES_PER_POINT: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tol {
    Algebraic,
    Fd,
}

pub struct ImmersionCheck {
    pub id: &'static str,
    pub anchor: &'static str,
    pub tol: Tol,
}

const fn chk(id: &'static str, anchor: &'static str, tol: Tol) -> ImmersionCheck {
    ImmersionCheck { id, anchor, tol }
}

/// Checks evaluated at every Lagrangian point, in report order. The first
/// is evaluated at every point.
pub const IMMERSION_CHECKS: [ImmersionCheck; 21] = [
    chk("lagrangian", "g(Je_i, e_j) = 0", Tol::Algebraic),
    chk("h-symmetry", "h_ij^k totally symmetric", Tol::Fd),
    chk("minimal", "Σ_i h_ii^k = 0", Tol::Fd),
    chk("omega-skew", "ω_ij^k = −ω_ik^j", Tol::Fd),
    chk("adapted-frame", "Pe_i = cos 2θ_i e_i + sin 2θ_i Je_i", Tol::Fd),
    chk("frame-orientation", "√3 JG(e_i,e_j) = Σ_k ε_ij^k e_k", Tol::Fd),
    chk("angle-sum", "θ_1 + θ_2 + θ_3 ∈ πℤ", Tol::Fd),
    chk("angle-derivative", "e_i(θ_j) = −h_jj^i", Tol::Fd),
    chk(
        "angle-coupling",
        "h_ij^k cos(θ_j − θ_k) = ((√3/6) ε_ij^k − ω_ij^k) sin(θ_j − θ_k)",
        Tol::Fd,
    ),
    chk("gauss", "R(X,Y,Z,W) = R̃(X,Y,Z,W) + g(h(X,W),h(Y,Z)) − g(h(X,Z),h(Y,W))", Tol::Fd),
    chk("codazzi", "(∇h)(X,Y,Z) − (∇h)(Y,X,Z) = (R̃(X,Y)Z)⊥", Tol::Fd),
    chk("ricci", "g(R⊥(X,Y)ξ,η) = g(R̃(X,Y)ξ,η) + g([A_ξ,A_η]X,Y)", Tol::Fd),
    chk(
        "normal-curvature",
        "R(X,Y,Z,W) − g(R⊥(X,Y)JZ,JW) = (1/3)(g(X,W)g(Y,Z) − g(X,Z)g(Y,W))",
        Tol::Fd,
    ),
    chk("normal-curvature-cross", "R⊥ from the intrinsic side equals R⊥ from the shape operators", Tol::Fd),
    chk("nabla-h-skew", "g((∇h)(X,Y,Z),JW) − g((∇h)(X,Y,W),JZ) = g(h(X,Y),G(W,Z))", Tol::Fd),
    chk("nabla-p-frame", "g((∇̃_{e_1}P)e_2,e_3) = (λ_2 − λ_3)/(2√3) and companions", Tol::Fd),
    chk("polarized", "polarized J-isotropy with the measured λ", Tol::Fd),
    chk("second-order", "second-order J-isotropy identity on frame 5-tuples", Tol::Fd),
    chk("i-reduction", "𝐈(e_2,e_1,e_1,e_1,e_3) in closed form", Tol::Fd),
    chk("reduced-instance", "the (e_2,e_1,e_1,e_1,e_3) instance equals 3√3λ", Tol::Fd),
    chk("cubic-critical", "∇F(v*) = 3F(v*)v* at the maximizer of g(h(v,v),Jv)", Tol::Fd),
];

/// Known values of a catalog entry.
struct Expectation {
    h123: Option<f64>,
    /// `(value, written form)`.
    omega123: Option<(f64, &'static str)>,
    angles: Option<[f64; 3]>,
    curvature: Option<f64>,
    totally_geodesic: bool,
}

fn expectation(name: &str) -> Option<Expectation> {
    let tri = [0.0, PI / 3.0, 2.0 * PI / 3.0];
    let geodesic = Expectation {
        h123: None,
        omega123: None,
        angles: None,
        curvature: None,
        totally_geodesic: true,
    };
    match name {
        "f1" | "f2" | "f3" | "f4" | "f5" | "f6" => Some(geodesic),
        "f7" => Some(Expectation {
            h123: Some(0.25),
            omega123: Some((3f64.sqrt() / 4.0, "√3/4")),
            angles: Some(tri),
            curvature: Some(3.0 / 16.0),
            totally_geodesic: false,
        }),
        "f8" => Some(Expectation {
            h123: Some(-0.5),
            omega123: Some((0.0, "0")),
            angles: Some(tri),
            curvature: Some(0.0),
            totally_geodesic: false,
        }),
        _ => None,
    }
}

/// A catalog name or a path to a descriptor file.
pub fn load(source: &str) -> Result<(ImmersionDescriptor, Option<String>), VerifyError> {
    let lower = source.to_ascii_lowercase();
    if let Some(src) = catalog_source(&lower) {
        return Ok((parse(src)?, Some(lower)));
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| VerifyError::Input(format!("`{source}` is neither a catalog name (f1..f8) nor a readable file: {e}")))?;
    let d = parse(&text).map_err(|e| VerifyError::Input(format!("{source}: {e}")))?;
    Ok((d, None))
}

fn chart_point_from(rng: &mut ChaCha8Rng) -> [f64; 3] {
    core::array::from_fn(|_| rng.gen_range(-CHART_BOX..=CHART_BOX))
}

type Value = Result<Option<f64>, String>;

/// Everything measured at one Lagrangian point.
pub struct PointData {
    /// Aligned with [`IMMERSION_CHECKS`].
    pub checks: Vec<Value>,
    pub h123: f64,
    pub h_max: f64,
    /// `max |h_ij^k − |ε_ij^k| h_12^3|`: distance from the single-component form.
    pub h_off: f64,
    pub omega123: f64,
    /// `max |ω_ij^k − ε_ij^k ω_12^3|`.
    pub omega_off: f64,
    pub theta: [f64; 3],
    pub degenerate: bool,
    pub constant_coefficients: bool,
    pub mu: Option<f64>,
    pub mu_spread: f64,
    pub lambda: Option<f64>,
    pub lambda_spread: f64,
    pub curvatures: Vec<f64>,
    pub mu1: Option<f64>,
    pub nabla_h_max: f64,
    /// Residual of the rejected `g(X,W)` reading of the curvature split.
    pub variant_residual: f64,
}

pub enum Outcome {
    Analyzed(Box<PointData>),
    NotLagrangian(f64),
    Failed(String),
}

fn off_form(t: &T3, form: impl Fn(usize, usize, usize) -> f64) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                r = r.max((t[i][j][k] - form(i, j, k)).abs());
            }
        }
    }
    r
}

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

fn measure(pg: &PointGeometry, lagrangian: f64, rng: &mut ChaCha8Rng) -> PointData {
    let iso = pg.isotropy_mu(SPHERE_SAMPLES, CONSTANCY_TOLERANCE);
    let jiso = pg.j_isotropy_lambda(SPHERE_SAMPLES, CONSTANCY_TOLERANCE);
    let angles = pg.angle_report();
    let split = pg.curvature_split_residuals();
    let cubic = pg.maximize_cubic_form();
    let tuples = PointGeometry::default_polarized_tuples();
    let ok = |v: f64| -> Value { Ok(Some(v)) };
    let needs_lambda = |f: &dyn Fn(f64) -> f64| -> Value { Ok(jiso.lambda.map(f)) };
    let checks = vec![
        ok(lagrangian),
        ok(pg.h.symmetry_residual()),
        ok(pg.h.trace_residual()),
        ok(pg.omega.antisymmetry_residual()),
        ok(pg.frame.p_residual),
        ok(pg.frame.orientation_residual),
        ok(angles.angle_sum),
        ok(angles.angle_derivative),
        ok(angles.angle_coupling),
        ok(pg.gauss_residual()),
        ok(pg.codazzi_residual()),
        ok(pg.ricci_residual()),
        ok(split.y_w),
        ok(pg.normal_curvature_cross_residual()),
        ok(pg.nabla_h_skew_residual()),
        ok(pg.nabla_p_frame_residual()),
        needs_lambda(&|l| pg.polarized_residual(l, &tuples)),
        match pg.second_order_residual(SPHERE_SAMPLES) {
            Ok(r) => Ok(Some(r)),
            Err(nk_core::Error::LambdaUnavailable { .. }) => Ok(None),
            Err(e) => Err(e.to_string()),
        },
        ok(pg.i_reduction_residual()),
        needs_lambda(&|l| pg.reduced_instance_residual(l)),
        cubic.as_ref().map(|c| Some(c.critical_residual)).map_err(|e| e.to_string()),
    ];
    let curvatures = (0..PLANES_PER_POINT)
        .filter_map(|_| {
            let (a, b) = (random_direction(rng), random_direction(rng));
            pg.sectional_curvature(&pg.vector(a), &pg.vector(b)).ok()
        })
        .collect();
    let h = &pg.h.coefficients;
    let w = &pg.omega.omega;
    PointData {
        checks,
        h123: h[0][1][2],
        h_max: pg.h.max_abs(),
        h_off: off_form(h, |i, j, k| levi_civita_symbol(i, j, k).abs() * h[0][1][2]),
        omega123: w[0][1][2],
        omega_off: off_form(w, |i, j, k| levi_civita_symbol(i, j, k) * w[0][1][2]),
        theta: pg.frame.theta,
        degenerate: pg.frame.degenerate,
        constant_coefficients: pg.nabla_h.path == NablaHPath::ConstantCoefficients,
        mu: iso.mu,
        mu_spread: iso.max_deviation,
        lambda: jiso.lambda,
        lambda_spread: jiso.max_deviation,
        curvatures,
        mu1: cubic.ok().map(|c| c.mu1),
        nabla_h_max: pg.nabla_h_max(),
        variant_residual: split.x_w,
    }
}

/// Analysis at chart point `x`, with `rng` feeding the random planes.
pub fn evaluate_point(an: &Analyzer, imm: &ImmersionDescriptor, x: [f64; 3], rng: &mut ChaCha8Rng) -> Outcome {
    let fp = match an.frame_at(imm, x) {
        Ok(fp) => fp,
        Err(e) => return Outcome::Failed(format!("at {x:?}: {e}")),
    };
    let dev = an.lagrangian_deviation(&fp);
    match an.analyze(imm, x) {
        Ok(pg) => Outcome::Analyzed(Box::new(measure(&pg, dev, rng))),
        Err(nk_core::Error::NotLagrangian { deviation }) => Outcome::NotLagrangian(deviation),
        Err(e) => Outcome::Failed(format!("at {x:?}: {e}")),
    }
}

pub(crate) fn evaluate_points(
    imm: &ImmersionDescriptor,
    cfg: &RunConfig,
) -> Result<Vec<Outcome>, VerifyError> {
    cfg.validate()?;
    if cfg.backend == Backend::Exact {
        return Err(VerifyError::Config(
            "immersion charts are transcendental; use the float backend".into(),
        ));
    }
    let an = Analyzer::new();
    par_map(cfg, cfg.samples, |i| {
        let mut rng = point_rng(cfg.seed, i as u64);
        let x = chart_point_from(&mut rng);
        Ok(evaluate_point(&an, imm, x, &mut rng))
    })
}

fn tol_of(cfg: &RunConfig, t: Tol) -> f64 {
    match t {
        Tol::Algebraic => cfg.tol_algebraic,
        Tol::Fd => cfg.tol_fd,
    }
}

fn aggregate(def: &ImmersionCheck, k: usize, outcomes: &[Outcome], tol: f64) -> CheckRecord {
    let mut values = Vec::new();
    let mut first_error = None;
    let mut analyzed = 0usize;
    for o in outcomes {
        match o {
            Outcome::Analyzed(p) => {
                analyzed += 1;
                match &p.checks[k] {
                    Ok(Some(v)) => values.push(*v),
                    Ok(None) => {}
                    Err(e) => {
                        first_error.get_or_insert_with(|| e.clone());
                    }
                }
            }
            Outcome::NotLagrangian(d) if k == 0 => values.push(*d),
            Outcome::NotLagrangian(_) => {}
            Outcome::Failed(e) => {
                first_error.get_or_insert_with(|| e.clone());
            }
        }
    }
    if k != 0 && analyzed == 0 && first_error.is_none() {
        return CheckRecord::skipped(def.id, def.anchor, tol, "no Lagrangian point");
    }
    if let Some(e) = first_error {
        return CheckRecord::failed(def.id, def.anchor, tol, e);
    }
    if values.is_empty() {
        let why = if def.id == "polarized" || def.id == "reduced-instance" || def.id == "second-order" {
            "not J-isotropic"
        } else {
            "not evaluated"
        };
        return CheckRecord::skipped(def.id, def.anchor, tol, why);
    }
    let max = values.iter().copied().fold(0.0f64, f64::max);
    let rec = CheckRecord::new(def.id, def.anchor, max, tol);
    let evaluated = values.len();
    if evaluated < outcomes.len() {
        rec.with_note(format!("{evaluated} of {} points", outcomes.len()))
    } else {
        rec
    }
}

fn observe(report: &mut VerificationReport, data: &[&PointData]) {
    let mut put = |name: &str, v: Vec<f64>| {
        if let Some(s) = Summary::of(&v) {
            report.observations.insert(name.into(), s);
        }
    };
    put("h123", data.iter().map(|p| p.h123).collect());
    put("h_max", data.iter().map(|p| p.h_max).collect());
    put("omega123", data.iter().map(|p| p.omega123).collect());
    for i in 0..3 {
        put(&format!("theta{}", i + 1), data.iter().map(|p| p.theta[i]).collect());
    }
    put("mu", data.iter().filter_map(|p| p.mu).collect());
    put("mu_spread", data.iter().map(|p| p.mu_spread).collect());
    put("lambda", data.iter().filter_map(|p| p.lambda).collect());
    put("lambda_spread", data.iter().map(|p| p.lambda_spread).collect());
    put("sectional_curvature", data.iter().flat_map(|p| p.curvatures.iter().copied()).collect());
    put("mu1", data.iter().filter_map(|p| p.mu1).collect());
    put("nabla_h_max", data.iter().map(|p| p.nabla_h_max).collect());
    put("curvature_variant_residual", data.iter().map(|p| p.variant_residual).collect());
}

fn expectation_checks(report: &mut VerificationReport, e: &Expectation, data: &[&PointData], tol: f64) {
    let max = |f: &dyn Fn(&PointData) -> f64| data.iter().map(|p| f(p)).fold(0.0f64, f64::max);
    if e.totally_geodesic {
        report.checks.push(CheckRecord::new(
            "expect-totally-geodesic",
            "h = 0",
            max(&|p| p.h_max),
            GEODESIC_TOLERANCE,
        ));
    }
    if let Some(c) = e.h123 {
        let r = max(&|p| (p.h123 - c).abs().max(p.h_off));
        report
            .checks
            .push(CheckRecord::new("expect-h", &format!("h_12^3 = {c}, other components 0"), r, tol));
    }
    if let Some((c, written)) = e.omega123 {
        let r = max(&|p| (p.omega123 - c).abs().max(p.omega_off));
        report
            .checks
            .push(CheckRecord::new("expect-omega", &format!("ω_ij^k = ({written}) ε_ij^k"), r, tol));
    }
    if let Some(a) = e.angles {
        let r = max(&|p| (0..3).map(|i| angle_distance(p.theta[i], a[i])).fold(0.0, f64::max));
        report
            .checks
            .push(CheckRecord::new("expect-angles", "(θ_1, θ_2, θ_3) = (0, π/3, 2π/3) mod π", r, tol));
    }
    if let Some(k) = e.curvature {
        let r = max(&|p| p.curvatures.iter().map(|s| (s - k).abs()).fold(0.0, f64::max));
        report
            .checks
            .push(CheckRecord::new("expect-curvature", &format!("K = {k}"), r, tol));
        let g = max(&|p| (0.25 - p.h123 * p.h123 - k).abs());
        report
            .checks
            .push(CheckRecord::new("expect-gauss-closure", "K = 1/4 − (h_12^3)²", g, 1e-9));
    }
}

pub fn run_immersion_report(source: &str, cfg: &RunConfig) -> Result<VerificationReport, VerifyError> {
    let start = std::time::Instant::now();
    let (imm, catalog_name) = load(source)?;
    let outcomes = evaluate_points(&imm, cfg)?;
    let mut report = VerificationReport::new(format!("immersion:{}", imm.name), cfg, cfg.samples);
    for (k, def) in IMMERSION_CHECKS.iter().enumerate() {
        report.checks.push(aggregate(def, k, &outcomes, tol_of(cfg, def.tol)));
    }
    let data: Vec<&PointData> = outcomes
        .iter()
        .filter_map(|o| match o {
            Outcome::Analyzed(p) => Some(p.as_ref()),
            _ => None,
        })
        .collect();
    let all_points = !data.is_empty() && data.len() == outcomes.len();
    let mut flags = BTreeMap::new();
    flags.insert("lagrangian".to_string(), all_points);
    if all_points {
        flags.insert("totally_geodesic".into(), data.iter().all(|p| p.h_max < GEODESIC_TOLERANCE));
        flags.insert("isotropic".into(), data.iter().all(|p| p.mu.is_some()));
        flags.insert("j_isotropic".into(), data.iter().all(|p| p.lambda.is_some()));
        flags.insert(
            "j_parallel".into(),
            data.iter().all(|p| p.lambda.is_some_and(|l| l.abs() < CONSTANCY_TOLERANCE)),
        );
        flags.insert("degenerate_frame".into(), data.iter().any(|p| p.degenerate));
        flags.insert("constant_coefficients".into(), data.iter().all(|p| p.constant_coefficients));
    }
    report.flags = flags;
    observe(&mut report, &data);
    if let (Some(name), true) = (catalog_name, all_points) {
        if let Some(e) = expectation(&name) {
            expectation_checks(&mut report, &e, &data, cfg.tol_fd);
        }
    }
    crate::stamp(&mut report, cfg, start);
    Ok(report)
}
