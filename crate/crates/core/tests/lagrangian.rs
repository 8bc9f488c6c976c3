//! Induced geometry of the catalog immersions against frozen values and
//! independent oracles.

use std::f64::consts::PI;

use nk_core::classify::{classify, curvature_for, depressed_cubic_roots};
use nk_core::dsl::{catalog, catalog_names, parse};
use nk_core::lagrangian::frame::angle_distance;
use nk_core::lagrangian::sphere::fibonacci;
use nk_core::lagrangian::{
    angle_relations_check, constant_coefficient_nabla_h, levi_civita_symbol, Analyzer, NablaHPath,
    PointGeometry,
};
use nk_core::structure::covariant_derivative_along;
use nk_core::{Error, LiePair, TangentVector};
use proptest::prelude::*;

const POINTS: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [0.13, -0.21, 0.3], [-0.35, 0.05, 0.12]];
const SQRT3: f64 = 1.732_050_807_568_877_2;

fn analyze<'a>(an: &'a Analyzer, name: &str, x: [f64; 3]) -> PointGeometry<'a> {
    an.analyze(&catalog(name).unwrap(), x).unwrap()
}

#[test]
fn identity_chart_pushes_forward_to_the_quaternion_units() {
    let an = Analyzer::new();
    let fp = an.frame_at(&catalog("f1").unwrap(), [0.0; 3]).unwrap();
    for (a, v) in fp.jacobian.iter().enumerate() {
        let mut want = [0.0; 6];
        want[3 + a] = 1.0;
        assert!((v.lie.clone() - LiePair::from_array(want)).max_abs() < 1e-12, "{a}");
    }
}

#[test]
fn lagrangian_test_accepts_catalog_and_rejects_mixed_frames() {
    let an = Analyzer::new();
    let nk = an.structure();
    for name in ["f3", "f7"] {
        for x in POINTS {
            let fp = an.frame_at(&catalog(name).unwrap(), x).unwrap();
            assert!(fp.gram_residual(nk) < 1e-12);
            assert!(an.check_lagrangian(&fp, 1e-8), "{name} {x:?}");
            // {e₁, Je₁, e₂} spans a non-Lagrangian 3-plane
            let mut mixed = fp.clone();
            let e = fp.frame_lie();
            mixed.frame[1] = TangentVector::new(fp.image.clone(), nk.j(&e[0]));
            mixed.frame[2] = TangentVector::new(fp.image.clone(), e[1].clone());
            assert!(!an.check_lagrangian(&mixed, 1e-8));
        }
    }
}

#[test]
fn totally_geodesic_entries() {
    let an = Analyzer::new();
    let angles: [(&str, [f64; 3]); 6] = [
        ("f1", [PI / 3.0; 3]),
        ("f2", [2.0 * PI / 3.0; 3]),
        ("f3", [0.0; 3]),
        ("f4", [0.0, PI / 2.0, PI / 2.0]),
        ("f5", [PI / 3.0, 5.0 * PI / 6.0, 5.0 * PI / 6.0]),
        ("f6", [PI / 6.0, PI / 6.0, 2.0 * PI / 3.0]),
    ];
    for (name, theta) in angles {
        for x in POINTS {
            let pg = analyze(&an, name, x);
            assert!(pg.h.max_abs() < 1e-7, "{name}");
            assert!(pg.nabla_h_max() < 1e-6, "{name}");
            for i in 0..3 {
                assert!(angle_distance(pg.frame.theta[i], theta[i]) < 1e-6, "{name} {:?}", pg.frame.theta);
            }
        }
    }
}

fn assert_h123_only(pg: &PointGeometry, c: f64) {
    let h = &pg.h.coefficients;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let want = levi_civita_symbol(i, j, k).abs() * c;
                assert!((h[i][j][k] - want).abs() < 1e-6, "h[{i}][{j}][{k}] = {}", h[i][j][k]);
            }
        }
    }
}

#[test]
fn catalog_values_for_the_nontrivial_entries() {
    let an = Analyzer::new();
    let tri = [0.0, PI / 3.0, 2.0 * PI / 3.0];
    for x in POINTS {
        let f7 = analyze(&an, "f7", x);
        assert_h123_only(&f7, 0.25);
        let f8 = analyze(&an, "f8", x);
        assert_h123_only(&f8, -0.5);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let w7 = SQRT3 / 4.0 * levi_civita_symbol(i, j, k);
                    assert!((f7.omega.omega[i][j][k] - w7).abs() < 1e-6);
                    assert!(f8.omega.omega[i][j][k].abs() < 1e-6);
                }
            }
        }
        for pg in [&f7, &f8] {
            assert!(!pg.frame.degenerate);
            assert!(pg.omega.antisymmetry_residual() < 1e-8);
            for i in 0..3 {
                assert!(angle_distance(pg.frame.theta[i], tri[i]) < 1e-6);
            }
        }
    }
}

/// `h(∂ₐ,∂_b)` as the normal part of the ambient derivative of `∂_b` along
/// the coordinate line of `∂ₐ`.
#[test]
fn second_fundamental_form_matches_ambient_derivative() {
    let an = Analyzer::new();
    let nk = an.structure();
    for name in ["f7", "f8"] {
        let imm = catalog(name).unwrap();
        let x = [0.1, 0.2, -0.15];
        let pg = an.analyze(&imm, x).unwrap();
        let fp = an.frame_at(&imm, x).unwrap();
        let e = pg.frame_vectors().clone();
        for a in 0..3 {
            let shifted = |t: f64| {
                let mut y = x;
                y[a] += t;
                an.frame_at(&imm, y).unwrap()
            };
            for b in 0..3 {
                let d = covariant_derivative_along(
                    nk,
                    |t| shifted(t).image,
                    |t| shifted(t).jacobian[b].clone(),
                    0.0,
                    1e-4,
                )
                .unwrap();
                let h = pg.h_vec(&fp.jacobian[a].lie, &fp.jacobian[b].lie);
                for ek in &e {
                    let je = nk.j(ek);
                    let fd = nk.metric(&d.lie, &je);
                    assert!((fd - nk.metric(&h, &je)).abs() < 1e-6, "{name} {a}{b}");
                }
            }
        }
    }
}

#[test]
fn nabla_h_paths_agree() {
    let an = Analyzer::new();
    for name in ["f7", "f8"] {
        let imm = catalog(name).unwrap();
        let x = POINTS[1];
        let pg = an.analyze(&imm, x).unwrap();
        assert_eq!(pg.nabla_h.path, NablaHPath::ConstantCoefficients);
        let jet = an.nabla_h_jet(&imm, x, &pg.frame).unwrap();
        let closed = constant_coefficient_nabla_h(&pg.h.coefficients, &pg.omega.omega);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let (a, b) = (jet.coefficients[i][j][k][l], closed[i][j][k][l]);
                        assert!((a - b).abs() < 1e-6, "{name} {i}{j}{k}{l}: {a} {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn gauss_codazzi_ricci_identities() {
    let an = Analyzer::new();
    for name in catalog_names() {
        for x in POINTS {
            let pg = analyze(&an, name, x);
            let split = pg.curvature_split_residuals();
            assert!(split.y_w < 1e-6, "{name}");
            assert!(pg.gauss_residual() < 1e-6, "{name}");
            assert!(pg.ricci_residual() < 1e-6, "{name}");
            assert!(pg.normal_curvature_cross_residual() < 1e-6, "{name}");
            assert!(pg.codazzi_residual() < 1e-6, "{name}");
            assert!(pg.nabla_h_skew_residual() < 1e-6, "{name}");
            assert!(pg.angle_report().max() < 1e-6, "{name} {:?}", pg.angle_report());
            assert!(pg.nabla_p_frame_residual() < 1e-6, "{name}");
        }
    }
}

#[test]
fn curvature_factor_variant_is_rejected() {
    let an = Analyzer::new();
    for name in ["f7", "f8"] {
        let r = analyze(&an, name, POINTS[2]).curvature_split_residuals();
        assert!(r.y_w < 1e-10);
        assert!(r.x_w > 0.1, "{name} {r:?}");
    }
}

#[test]
fn isotropy_separates_totally_geodesic_entries() {
    let an = Analyzer::new();
    for name in ["f1", "f2", "f3", "f4", "f5", "f6"] {
        let r = analyze(&an, name, POINTS[1]).isotropy_mu(512, 1e-6);
        assert_eq!(r.samples, 525);
        assert!(r.mu.unwrap().abs() < 1e-12, "{name}");
    }
    // |h(v,v)|² = 4c²(v₁²v₂² + v₁²v₃² + v₂²v₃²) spans [0, 4c²/3]
    for (name, c) in [("f7", 0.25f64), ("f8", -0.5)] {
        let r = analyze(&an, name, POINTS[1]).isotropy_mu(512, 1e-6);
        assert!(r.mu.is_none());
        assert!((r.max_deviation - 2.0 * c * c / 3.0).abs() < 1e-9, "{name} {r:?}");
    }
}

#[test]
fn j_isotropy_constant_vanishes() {
    let an = Analyzer::new();
    for name in catalog_names() {
        let r = analyze(&an, name, POINTS[2]).j_isotropy_lambda(512, 1e-6);
        assert!(r.lambda.unwrap().abs() < 1e-6, "{name}");
    }
    let tuples = PointGeometry::default_polarized_tuples();
    for name in ["f7", "f8"] {
        let pg = analyze(&an, name, POINTS[2]);
        assert!(pg.polarized_residual(0.0, &tuples) < 1e-6);
        // the diagonal tuple registers a wrong constant at full strength
        assert!(pg.polarized_residual(0.1, &tuples) >= 0.1 - 1e-9);
    }
}

#[test]
fn second_order_identity_and_its_reductions() {
    let an = Analyzer::new();
    for name in ["f7", "f8"] {
        let pg = analyze(&an, name, POINTS[1]);
        assert!(pg.second_order_residual(64).unwrap() < 1e-5);
        assert!(pg.i_reduction_residual() < 1e-6);
        assert!(pg.reduced_instance_residual(0.0) < 1e-6);
    }
}

/// Fibonacci lattice followed by a local zoom around the best sample.
fn brute_force_max(pg: &PointGeometry) -> f64 {
    let f = |v: [f64; 3]| {
        let x = pg.vector(v);
        pg.structure().metric(&pg.h_vec(&x, &x), &pg.structure().j(&x))
    };
    let mut best = fibonacci(20_000)
        .into_iter()
        .map(|v| (f(v), v))
        .fold((f64::MIN, [0.0; 3]), |a, b| if b.0 > a.0 { b } else { a });
    let mut r = 0.05;
    for _ in 0..40 {
        for d in fibonacci(64) {
            let v = [best.1[0] + r * d[0], best.1[1] + r * d[1], best.1[2] + r * d[2]];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let v = v.map(|c| c / n);
            if f(v) > best.0 {
                best = (f(v), v);
            }
        }
        r *= 0.7;
    }
    best.0
}

#[test]
fn cubic_form_maximum() {
    let an = Analyzer::new();
    for (name, c) in [("f7", 0.25f64), ("f8", -0.5)] {
        let pg = analyze(&an, name, POINTS[2]);
        let m = pg.maximize_cubic_form().unwrap();
        assert!((m.mu1 - 2.0 * c.abs() / SQRT3).abs() < 1e-9);
        assert!((m.mu1 - brute_force_max(&pg)).abs() < 1e-8);
        assert!(m.critical_residual < 1e-8);
        assert!(m.diagonal_residual < 1e-8);
    }
    let m = analyze(&an, "f3", POINTS[1]).maximize_cubic_form().unwrap();
    assert!(m.mu1.abs() < 1e-7);
}

#[test]
fn constant_sectional_curvature() {
    let an = Analyzer::new();
    let dirs = fibonacci(200);
    for (name, c) in [("f7", 0.25f64), ("f8", -0.5)] {
        let pg = analyze(&an, name, POINTS[1]);
        let k = curvature_for(pg.h.coefficients[0][1][2]);
        assert!((k - (0.25 - c * c)).abs() < 1e-9);
        for p in dirs.chunks(2).take(100) {
            let s = pg.sectional_curvature(&pg.vector(p[0]), &pg.vector(p[1])).unwrap();
            assert!((s - k).abs() < 1e-6, "{name} {s}");
        }
        let e1 = pg.vector([1.0, 0.0, 0.0]);
        assert!(matches!(pg.sectional_curvature(&e1, &e1.scale(&2.0)), Err(Error::DegeneratePlane)));
    }
}

#[test]
fn adapted_frame_is_a_fixed_point() {
    let an = Analyzer::new();
    // repeated angles leave a rotation freedom inside the eigenspace
    for name in ["f4", "f5", "f6"] {
        assert!(analyze(&an, name, POINTS[1]).frame.degenerate, "{name}");
    }
    for name in ["f7", "f8"] {
        let pg = analyze(&an, name, POINTS[1]);
        let again = an.adapted_frame(&pg.frame.frame).unwrap();
        for i in 0..3 {
            let d = again.frame.frame[i].lie.clone() - pg.frame.frame.frame[i].lie.clone();
            assert!(d.max_abs() < 1e-9, "{name}");
        }
        assert!(pg.frame.p_residual < 1e-8 && pg.frame.orientation_residual < 1e-8);
    }
}

#[test]
fn classification_arithmetic() {
    let roots = depressed_cubic_roots(32, -6, 1);
    assert_eq!(roots.len(), 2);
    assert!((roots[0].value + 0.5).abs() < 1e-15 && roots[0].multiplicity == 1);
    assert!((roots[1].value - 0.25).abs() < 1e-15 && roots[1].multiplicity == 2);
    let c = classify().unwrap();
    let curv: Vec<f64> = c.roots.iter().map(|r| r.curvature).collect();
    assert!((curv[0]).abs() < 1e-15 && (curv[1] - 3.0 / 16.0).abs() < 1e-15);
    assert!(c.roots.iter().all(|r| r.residual < 1e-14));
    assert_eq!(c.roots[0].immersions, ["f8"]);
    assert_eq!(c.roots[1].immersions, ["f7"]);

    let tri = angle_relations_check([0.0, PI / 3.0, 2.0 * PI / 3.0], 0.0);
    assert!(tri.max() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn angle_relations_sum_to_zero(t in prop::array::uniform3(-PI..PI)) {
        let r = angle_relations_check(t, 0.0);
        prop_assert!(r.sum.abs() < 1e-14);
        for i in 0..3 {
            prop_assert!((r.relations[i] - r.products[i]).abs() < 1e-14);
        }
    }
}

#[test]
fn chart_and_lagrangian_failures_are_reported() {
    let an = Analyzer::new();
    let flat = parse("immersion flat\nvars x y z\nleft = exp(x, 0, 0)\nright = exp(y, 0, 0)\n").unwrap();
    assert!(matches!(an.frame_at(&flat, [0.1, 0.0, 0.0]), Err(Error::DegenerateChart)));
    let skew = parse("immersion skew\nvars x y z\nleft = exp(x, y, z)\nright = exp(y, 0, 0)\n").unwrap();
    let fp = an.frame_at(&skew, [0.1, 0.2, 0.3]).unwrap();
    assert!(an.lagrangian_deviation(&fp) > 1e-3);
    assert!(matches!(an.analyze(&skew, [0.1, 0.2, 0.3]), Err(Error::NotLagrangian { .. })));
}
