//! Identities of the structure tensors `g, J, P, G, ∇̃, R̃` on random inputs.

use nk_core::structure::lie_coords;
use nk_core::{LiePair, ManifoldPoint, NkStructure, QSqrt3, Quaternion, Scalar, UnitQuaternion};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Backend, RunConfig};
use crate::par::{par_map, point_rng};
use crate::report::{CheckRecord, Summary, VerificationReport};
use crate::VerifyError;

type Check<S> = fn(&NkStructure<S>, &Tuple<S>) -> f64;

/// A base point and three tangent vectors there, in Lie coordinates.
pub struct Tuple<S> {
    pub x: LiePair<S>,
    pub y: LiePair<S>,
    pub z: LiePair<S>,
}

pub struct StructureCheck {
    pub id: &'static str,
    pub anchor: &'static str,
}

pub const STRUCTURE_CHECKS: [StructureCheck; 13] = [
    StructureCheck { id: "j-square", anchor: "J²X = −X" },
    StructureCheck { id: "j-hermitian", anchor: "g(JX,JY) = g(X,Y)" },
    StructureCheck { id: "p-involution", anchor: "P²X = X, g(PX,Y) = g(X,PY)" },
    StructureCheck { id: "p-j-anticommute", anchor: "PJ = −JP" },
    StructureCheck { id: "g-skew", anchor: "G(X,Y) + G(Y,X) = 0" },
    StructureCheck { id: "g-j", anchor: "G(X,JY) + JG(X,Y) = 0" },
    StructureCheck { id: "g-metric-skew", anchor: "g(G(X,Y),Z) + g(G(X,Z),Y) = 0" },
    StructureCheck {
        id: "nabla-g",
        anchor: "(∇̃_X G)(Y,Z) = (1/3)(g(Y,JZ)X + g(X,Z)JY − g(X,Y)JZ)",
    },
    StructureCheck { id: "nabla-p", anchor: "JG(X,PY) + JPG(X,Y) = 2(∇̃_X P)Y" },
    StructureCheck { id: "nabla-pj", anchor: "−G(X,PY) + PG(X,Y) = 2(∇̃_X PJ)Y" },
    StructureCheck { id: "nearly-kaehler", anchor: "(∇̃_X J)X = 0" },
    StructureCheck { id: "connection", anchor: "∇̃ torsion-free and metric" },
    StructureCheck {
        id: "curvature",
        anchor: "closed-form R̃(X,Y)Z = ∇̃_X∇̃_Y Z − ∇̃_Y∇̃_X Z − ∇̃_[X,Y] Z",
    },
];

fn abs<S: Scalar>(s: S) -> f64 {
    s.to_f64().abs()
}

fn checks<S: Scalar>() -> [Check<S>; 13] {
    [
        |nk, t| (nk.j(&nk.j(&t.x)) + t.x.clone()).max_abs(),
        |nk, t| abs(nk.metric(&nk.j(&t.x), &nk.j(&t.y)) - nk.metric(&t.x, &t.y)),
        |nk, t| {
            let inv = (nk.p(&nk.p(&t.x)) - t.x.clone()).max_abs();
            inv.max(abs(nk.metric(&nk.p(&t.x), &t.y) - nk.metric(&t.x, &nk.p(&t.y))))
        },
        |nk, t| (nk.pj(&t.x) + nk.jp(&t.x)).max_abs(),
        |nk, t| (nk.tensor_g(&t.x, &t.y) + nk.tensor_g(&t.y, &t.x)).max_abs(),
        |nk, t| (nk.tensor_g(&t.x, &nk.j(&t.y)) + nk.j(&nk.tensor_g(&t.x, &t.y))).max_abs(),
        |nk, t| abs(nk.metric(&nk.tensor_g(&t.x, &t.y), &t.z) + nk.metric(&nk.tensor_g(&t.x, &t.z), &t.y)),
        |nk, t| {
            let (x, y, z) = (&t.x, &t.y, &t.z);
            let third = S::from_ratio(1, 3);
            let rhs = (x.scale(&nk.metric(y, &nk.j(z))) + nk.j(y).scale(&nk.metric(x, z))
                - nk.j(z).scale(&nk.metric(x, y)))
            .scale(&third);
            (nk.nabla_g(x, y, z) - rhs).max_abs()
        },
        |nk, t| {
            let (dp, _) = nk.nabla_p_direct(&t.x, &t.y);
            let lhs = nk.j(&nk.tensor_g(&t.x, &nk.p(&t.y))) + nk.jp(&nk.tensor_g(&t.x, &t.y));
            (lhs - dp.scale(&S::from_i64(2))).max_abs()
        },
        |nk, t| {
            let (_, dpj) = nk.nabla_p_direct(&t.x, &t.y);
            let lhs = nk.p(&nk.tensor_g(&t.x, &t.y)) - nk.tensor_g(&t.x, &nk.p(&t.y));
            (lhs - dpj.scale(&S::from_i64(2))).max_abs()
        },
        |nk, t| nk.tensor_g(&t.x, &t.x).max_abs(),
        |nk, t| {
            let (x, y, z) = (&t.x, &t.y, &t.z);
            let torsion = (nk.levi_civita(x, y) - nk.levi_civita(y, x) - nk.bracket(x, y)).max_abs();
            let metric = abs(nk.metric(&nk.levi_civita(x, y), z) + nk.metric(y, &nk.levi_civita(x, z)));
            torsion.max(metric)
        },
        |nk, t| (nk.curvature(&t.x, &t.y, &t.z) - nk.curvature_from_connection(&t.x, &t.y, &t.z)).max_abs(),
    ]
}

/// A unit quaternion `q²/|q|²`, rational whenever `q` is.
fn unit<S: Scalar>(q: Quaternion<S>) -> Result<UnitQuaternion<S>, VerifyError> {
    let n = q.norm_sq();
    let r = n.recip().ok_or_else(|| VerifyError::Config("zero quaternion drawn".into()))?;
    Ok(UnitQuaternion::new((q.clone() * q).scale(&r))?)
}

fn tuple<S: Scalar>(rng: &mut ChaCha8Rng, draw: fn(&mut ChaCha8Rng) -> S) -> Result<Tuple<S>, VerifyError> {
    let quat = |rng: &mut ChaCha8Rng| loop {
        let q = Quaternion::from_components(core::array::from_fn(|_| draw(rng)));
        if !q.norm_sq().is_zero() {
            break q;
        }
    };
    let base = ManifoldPoint::new(unit(quat(rng))?, unit(quat(rng))?);
    // ambient tangent pairs (pα, qβ), converted back through the base point
    let vector = |rng: &mut ChaCha8Rng| -> Result<LiePair<S>, VerifyError> {
        let v = LiePair::from_array(core::array::from_fn(|_| draw(rng)));
        let u = (*base.p).clone() * v.alpha().to_quaternion();
        let w = (*base.q).clone() * v.beta().to_quaternion();
        Ok(lie_coords(&base, &u, &w)?.lie)
    };
    Ok(Tuple {
        x: vector(rng)?,
        y: vector(rng)?,
        z: vector(rng)?,
    })
}

fn draw_float(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-1.0..1.0)
}

/// `n/d` with `|n| ≤ 6`, `1 ≤ d ≤ 6`.
fn draw_rational(rng: &mut ChaCha8Rng) -> QSqrt3 {
    QSqrt3::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=6))
}

fn residuals<S: Scalar + Send + Sync>(cfg: &RunConfig, draw: fn(&mut ChaCha8Rng) -> S) -> Result<Vec<Vec<f64>>, VerifyError> {
    let nk = NkStructure::<S>::new();
    let table = checks::<S>();
    par_map(cfg, cfg.samples, |i| {
        let mut rng = point_rng(cfg.seed, i as u64);
        let t = tuple(&mut rng, draw)?;
        Ok(table.iter().map(|c| c(&nk, &t)).collect())
    })
}

pub(crate) fn structure_tolerance(cfg: &RunConfig) -> f64 {
    match cfg.backend {
        // exact identities leave no residual at all
        Backend::Exact => 0.0,
        Backend::Float => cfg.tol_algebraic,
    }
}

/// Per-check residuals over `cfg.samples` draws, as `[check][sample]`.
pub(crate) fn structure_samples(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, VerifyError> {
    cfg.validate()?;
    let per_sample = match cfg.backend {
        Backend::Exact => residuals::<QSqrt3>(cfg, draw_rational)?,
        Backend::Float => residuals::<f64>(cfg, draw_float)?,
    };
    Ok((0..STRUCTURE_CHECKS.len())
        .map(|c| per_sample.iter().map(|r| r[c]).collect())
        .collect())
}

pub fn run_structure_suite(cfg: &RunConfig) -> Result<VerificationReport, VerifyError> {
    let start = std::time::Instant::now();
    let table = structure_samples(cfg)?;
    let mut report = VerificationReport::new("structure", cfg, cfg.samples);
    let tol = structure_tolerance(cfg);
    for (def, values) in STRUCTURE_CHECKS.iter().zip(&table) {
        let max = Summary::of(values).map_or(0.0, |s| s.max);
        report.checks.push(CheckRecord::new(def.id, def.anchor, max, tol));
    }
    crate::stamp(&mut report, cfg, start);
    Ok(report)
}
