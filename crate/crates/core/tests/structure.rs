//! Structure tensors of S³×S³: exact certification over ℚ(√3), randomized
//! float identities, and oracles built from a coordinate chart.

use nk_core::structure::covariant_derivative_along;
use nk_core::{exp_im, ImaginaryQuaternion, LiePair, ManifoldPoint, NkStructure, QSqrt3, Quaternion, TangentVector};
use proptest::prelude::*;

type Q = QSqrt3;

fn exact_basis() -> Vec<LiePair<Q>> {
    (0..6).map(LiePair::basis).collect()
}

fn third(nk: &NkStructure<Q>, a: &LiePair<Q>, b: &LiePair<Q>) -> Q {
    nk.metric(a, b) * Q::ratio(1, 3)
}

#[test]
fn exact_identities_on_basis_triples() {
    let nk = NkStructure::<Q>::new();
    let b = exact_basis();
    for x in &b {
        // nearly Kähler: (∇̃ₓJ)X = 0
        assert!(nk.tensor_g(x, x).is_zero());
        for y in &b {
            let gxy = nk.tensor_g(x, y);
            assert!((gxy.clone() + nk.tensor_g(y, x)).is_zero());
            assert!((nk.tensor_g(x, &nk.j(y)) + nk.j(&nk.tensor_g(x, y))).is_zero());
            let (dp, dpj) = nk.nabla_p(x, y);
            let (dp2, dpj2) = nk.nabla_p_direct(x, y);
            assert!((dp - dp2).is_zero() && (dpj - dpj2).is_zero());
            for z in &b {
                assert_eq!(nk.metric(&nk.tensor_g(x, y), z) + nk.metric(&nk.tensor_g(x, z), y), Q::ratio(0, 1));
                assert!((nk.curvature(x, y, z) - nk.curvature_from_connection(x, y, z)).is_zero());
                // (∇̃ₓG)(Y,Z) = (1/3)(g(Y,JZ)X + g(X,Z)JY − g(X,Y)JZ)
                let rhs = x.scale(&third(&nk, y, &nk.j(z))) + nk.j(y).scale(&third(&nk, x, z))
                    - nk.j(z).scale(&third(&nk, x, y));
                assert!((nk.nabla_g(x, y, z) - rhs).is_zero());
                // metricity and torsion
                assert_eq!(
                    nk.metric(&nk.levi_civita(x, y), z) + nk.metric(y, &nk.levi_civita(x, z)),
                    Q::ratio(0, 1)
                );
            }
            assert!((nk.levi_civita(x, y) - nk.levi_civita(y, x) - nk.bracket(x, y)).is_zero());
        }
    }
}

#[test]
fn printed_variant_of_the_g_j_identity_fails() {
    // G(X,JY) + JG(Y,X) is not zero: the sign pairs with G(X,Y), not G(Y,X)
    let nk = NkStructure::<Q>::new();
    let b = exact_basis();
    let offending = b.iter().any(|x| {
        b.iter()
            .any(|y| !(nk.tensor_g(x, &nk.j(y)) + nk.j(&nk.tensor_g(y, x))).is_zero())
    });
    assert!(offending);
}

fn lie() -> impl Strategy<Value = LiePair<f64>> {
    prop::array::uniform6(-1.0f64..1.0).prop_map(LiePair::from_array)
}

fn close(a: &LiePair<f64>, b: &LiePair<f64>, tol: f64) -> bool {
    (a.clone() - b.clone()).max_abs() < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn algebraic_structure(x in lie(), y in lie(), z in lie()) {
        let nk = NkStructure::<f64>::new();
        prop_assert!(close(&nk.j(&nk.j(&x)), &(-x.clone()), 1e-14));
        prop_assert!(close(&nk.p(&nk.p(&x)), &x, 1e-15));
        prop_assert!(close(&nk.pj(&x), &(-nk.jp(&x)), 1e-14));
        prop_assert!((nk.metric(&x, &y) - nk.metric(&y, &x)).abs() < 1e-14);
        prop_assert!((nk.metric(&nk.j(&x), &nk.j(&y)) - nk.metric(&x, &y)).abs() < 1e-13);
        prop_assert!((nk.metric(&nk.p(&x), &y) - nk.metric(&x, &nk.p(&y))).abs() < 1e-13);
        prop_assert!(nk.metric(&x, &x) >= 0.0);
        prop_assert!(nk.tensor_g(&x, &x).max_abs() < 1e-13);
        prop_assert!(close(&nk.curvature(&x, &x, &z), &LiePair::zero(), 1e-13));
        let bianchi = nk.curvature(&x, &y, &z) + nk.curvature(&y, &z, &x) + nk.curvature(&z, &x, &y);
        prop_assert!(bianchi.max_abs() < 1e-12);
        prop_assert!(close(&nk.curvature(&x, &y, &z), &nk.curvature_from_connection(&x, &y, &z), 1e-12));
        let torsion = nk.levi_civita(&x, &y) - nk.levi_civita(&y, &x) - nk.bracket(&x, &y);
        prop_assert!(torsion.max_abs() < 1e-13);
    }

    #[test]
    fn metric_is_positive_definite(x in lie()) {
        let nk = NkStructure::<f64>::new();
        let n = x.norm_euclid();
        prop_assume!(n > 1e-3);
        // smallest eigenvalue of the 6×6 Gram form is 2/3
        prop_assert!(nk.metric(&x, &x) >= (2.0 / 3.0) * n * n - 1e-12);
    }
}

fn pair(a: [f64; 3], b: [f64; 3]) -> LiePair<f64> {
    LiePair::new(ImaginaryQuaternion::from_array(a), ImaginaryQuaternion::from_array(b))
}

fn q_exp(v: [f64; 3]) -> Quaternion<f64> {
    exp_im(&ImaginaryQuaternion::from_array(v)).into_inner()
}

/// The bracket is the mixed second derivative of the group commutator
/// `exp(tX) exp(sY) exp(−tX) exp(−sY)` at the identity.
#[test]
fn bracket_matches_flow_commutator() {
    let nk = NkStructure::<f64>::new();
    let x = pair([0.3, -0.7, 0.2], [0.5, 0.1, -0.4]);
    let y = pair([-0.2, 0.4, 0.9], [0.6, -0.3, 0.8]);
    let comm = |t: f64, s: f64| {
        let (a, b) = (x.alpha().to_array(), x.beta().to_array());
        let (c, d) = (y.alpha().to_array(), y.beta().to_array());
        let sc = |v: [f64; 3], k: f64| v.map(|e| e * k);
        let p = q_exp(sc(a, t)) * q_exp(sc(c, s)) * q_exp(sc(a, -t)) * q_exp(sc(c, -s));
        let q = q_exp(sc(b, t)) * q_exp(sc(d, s)) * q_exp(sc(b, -t)) * q_exp(sc(d, -s));
        (p, q)
    };
    let h = 1e-4;
    let mixed = |f: &dyn Fn(f64, f64) -> Quaternion<f64>| {
        (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)).scale(&(0.25 / (h * h)))
    };
    let dp = mixed(&|t, s| comm(t, s).0);
    let dq = mixed(&|t, s| comm(t, s).1);
    let fd = LiePair::new(dp.im(), dq.im());
    assert!(close(&fd, &nk.bracket(&x, &y), 1e-6), "{:?}", fd);
}

/// Chart `(u, v) ↦ (exp(u), exp(v))` around a base point, with the metric
/// pulled back and Christoffel symbols from its finite differences.
struct Chart {
    base: (Quaternion<f64>, Quaternion<f64>),
}

impl Chart {
    fn point(&self, c: &[f64; 6]) -> (Quaternion<f64>, Quaternion<f64>) {
        (
            self.base.0.clone() * q_exp([c[0], c[1], c[2]]),
            self.base.1.clone() * q_exp([c[3], c[4], c[5]]),
        )
    }

    /// Lie coordinates of `∂ᵢ` at chart point `c`.
    fn fields(&self, c: &[f64; 6]) -> [LiePair<f64>; 6] {
        let h = 1e-6;
        let (p, q) = self.point(c);
        core::array::from_fn(|i| {
            let (mut a, mut b) = (*c, *c);
            a[i] += h;
            b[i] -= h;
            let (pa, qa) = self.point(&a);
            let (pb, qb) = self.point(&b);
            let dp = (pa - pb).scale(&(0.5 / h));
            let dq = (qa - qb).scale(&(0.5 / h));
            LiePair::new((p.conj() * dp).im(), (q.conj() * dq).im())
        })
    }

    fn gram(&self, nk: &NkStructure<f64>, c: &[f64; 6]) -> [[f64; 6]; 6] {
        let z = self.fields(c);
        core::array::from_fn(|i| core::array::from_fn(|j| nk.metric(&z[i], &z[j])))
    }

    /// Components of a Lie-coordinate vector in the chart basis.
    fn components(&self, c: &[f64; 6], v: &LiePair<f64>) -> Vec<f64> {
        let z = self.fields(c);
        let a: Vec<Vec<f64>> = (0..6).map(|r| (0..6).map(|k| z[k].c[r]).collect()).collect();
        nk_core::linalg::solve(a, v.c.to_vec()).unwrap()
    }

    /// `∇_X Y` of left-invariant fields via Christoffel symbols, in Lie
    /// coordinates at the chart origin.
    fn covariant(&self, nk: &NkStructure<f64>, x: &LiePair<f64>, y: &LiePair<f64>) -> LiePair<f64> {
        let o = [0.0; 6];
        let step = 1e-3;
        let shift = |i: usize, s: f64| {
            let mut c = o;
            c[i] += s;
            c
        };
        let g0 = self.gram(nk, &o);
        let dg: Vec<[[f64; 6]; 6]> = (0..6)
            .map(|l| {
                let (gp, gm) = (self.gram(nk, &shift(l, step)), self.gram(nk, &shift(l, -step)));
                core::array::from_fn(|i| core::array::from_fn(|j| (gp[i][j] - gm[i][j]) / (2.0 * step)))
            })
            .collect();
        let ginv = nk_core::linalg::invert(&g0.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        let xc = self.components(&o, x);
        let yc = self.components(&o, y);
        let dyc: Vec<Vec<f64>> = (0..6)
            .map(|l| {
                let (a, b) = (self.components(&shift(l, step), y), self.components(&shift(l, -step), y));
                (0..6).map(|k| (a[k] - b[k]) / (2.0 * step)).collect()
            })
            .collect();
        let z = self.fields(&o);
        let mut out = LiePair::zero();
        for k in 0..6 {
            let mut v: f64 = (0..6).map(|l| xc[l] * dyc[l][k]).sum();
            for i in 0..6 {
                for j in 0..6 {
                    let gamma: f64 = (0..6)
                        .map(|m| 0.5 * ginv[k][m] * (dg[i][j][m] + dg[j][i][m] - dg[m][i][j]))
                        .sum();
                    v += gamma * xc[i] * yc[j];
                }
            }
            out = out + z[k].scale(&v);
        }
        out
    }
}

fn chart() -> Chart {
    Chart {
        base: (q_exp([0.2, -0.1, 0.4]), q_exp([-0.3, 0.5, 0.1])),
    }
}

#[test]
fn connection_matches_chart_christoffel_symbols() {
    let nk = NkStructure::<f64>::new();
    let c = chart();
    let x = pair([1.0, 0.0, 0.0], [0.0, 0.0, 0.0]);
    assert!(close(&c.covariant(&nk, &x, &x), &nk.levi_civita(&x, &x), 1e-6));
    let y = pair([0.2, -0.5, 0.3], [0.7, 0.1, -0.6]);
    let w = pair([-0.4, 0.8, 0.1], [0.3, 0.2, 0.5]);
    assert!(close(&c.covariant(&nk, &y, &w), &nk.levi_civita(&y, &w), 1e-6));
}

#[test]
fn g_tensor_matches_chart_derivative_of_j() {
    let nk = NkStructure::<f64>::new();
    let c = chart();
    let x = pair([1.0, 0.0, 0.0], [0.0, 0.0, 0.0]);
    let y = pair([0.0, 1.0, 0.0], [0.0, 0.0, 0.0]);
    let oracle = c.covariant(&nk, &x, &nk.j(&y)) - nk.j(&c.covariant(&nk, &x, &y));
    let g = nk.tensor_g(&x, &y);
    assert!(g.max_abs() > 0.1);
    assert!(close(&oracle, &g, 1e-6));
}

/// RK4 for a geodesic `p' = pα, q' = qβ, ζ' = −A(ζ,ζ)` together with a field
/// transported by `z' = −A(ζ,z)`.
fn geodesic(nk: &NkStructure<f64>, zeta0: LiePair<f64>, z0: LiePair<f64>, t: f64) -> (ManifoldPoint<f64>, LiePair<f64>, LiePair<f64>) {
    let n = ((t.abs() / 1e-3).ceil() as usize).max(1);
    let h = t / n as f64;
    let (mut p, mut q) = (Quaternion::one(), Quaternion::one());
    let (mut zeta, mut z) = (zeta0, z0);
    type State = (Quaternion<f64>, Quaternion<f64>, LiePair<f64>, LiePair<f64>);
    let rhs = |s: &State| -> State {
        (
            s.0.clone() * s.2.alpha().to_quaternion(),
            s.1.clone() * s.2.beta().to_quaternion(),
            -nk.levi_civita(&s.2, &s.2),
            -nk.levi_civita(&s.2, &s.3),
        )
    };
    let add = |s: &State, d: &State, k: f64| -> State {
        (
            s.0.clone() + d.0.scale(&k),
            s.1.clone() + d.1.scale(&k),
            s.2.clone() + d.2.scale(&k),
            s.3.clone() + d.3.scale(&k),
        )
    };
    for _ in 0..n {
        let s: State = (p.clone(), q.clone(), zeta.clone(), z.clone());
        let k1 = rhs(&s);
        let k2 = rhs(&add(&s, &k1, h / 2.0));
        let k3 = rhs(&add(&s, &k2, h / 2.0));
        let k4 = rhs(&add(&s, &k3, h));
        let mut next = s.clone();
        for (k, w) in [(&k1, 1.0), (&k2, 2.0), (&k3, 2.0), (&k4, 1.0)] {
            next = add(&next, k, h * w / 6.0);
        }
        (p, q, zeta, z) = next;
    }
    let pt = ManifoldPoint::from_quaternions(p.scale(&(1.0 / p.norm())), q.scale(&(1.0 / q.norm()))).unwrap();
    (pt, zeta, z)
}

#[test]
fn transported_field_along_geodesic_is_parallel() {
    let nk = NkStructure::<f64>::new();
    let zeta0 = pair([0.4, -0.2, 0.7], [0.1, 0.5, -0.3]);
    let z0 = pair([-0.6, 0.3, 0.2], [0.2, -0.1, 0.9]);
    let curve = |t: f64| geodesic(&nk, zeta0.clone(), z0.clone(), t).0;
    let velocity = |t: f64| {
        let (pt, zeta, _) = geodesic(&nk, zeta0.clone(), z0.clone(), t);
        TangentVector::new(pt, zeta)
    };
    let field = |t: f64| {
        let (pt, _, z) = geodesic(&nk, zeta0.clone(), z0.clone(), t);
        TangentVector::new(pt, z)
    };
    for t0 in [0.3, 0.8] {
        let d = covariant_derivative_along(&nk, curve, field, t0, 1e-4).unwrap();
        assert!(d.lie.max_abs() < 1e-6, "{:?}", d.lie);
        let a = covariant_derivative_along(&nk, curve, velocity, t0, 1e-4).unwrap();
        assert!(a.lie.max_abs() < 1e-6);
    }
    // metricity: speed and the pairing with the transported field are conserved
    let (_, zeta, z) = geodesic(&nk, zeta0.clone(), z0.clone(), 1.0);
    assert!((nk.metric(&zeta, &zeta) - nk.metric(&zeta0, &zeta0)).abs() < 1e-10);
    assert!((nk.metric(&zeta, &z) - nk.metric(&zeta0, &z0)).abs() < 1e-10);
}

#[test]
fn covariant_derivative_product_rule() {
    let nk = NkStructure::<f64>::new();
    let a = pair([0.3, 0.1, -0.2], [0.0, 0.4, 0.1]);
    let curve = |t: f64| {
        ManifoldPoint::from_quaternions(q_exp([0.3 * t, 0.1 * t, -0.2 * t]), q_exp([0.0, 0.4 * t, 0.1 * t])).unwrap()
    };
    let z = |t: f64| TangentVector::new(curve(t), pair([t, t * t, 1.0], [0.5, -t, 0.2 * t]));
    let w = |t: f64| TangentVector::new(curve(t), pair([1.0 - t, 0.3, t * t * t], [t, 0.1, -0.4]));
    let t0 = 0.4;
    let h = 1e-4;
    let gz = |t: f64| nk.metric(&z(t).lie, &w(t).lie);
    let lhs = (gz(t0 + h) - gz(t0 - h)) / (2.0 * h);
    let dz = covariant_derivative_along(&nk, curve, z, t0, h).unwrap();
    let dw = covariant_derivative_along(&nk, curve, w, t0, h).unwrap();
    let rhs = nk.metric(&dz.lie, &w(t0).lie) + nk.metric(&z(t0).lie, &dw.lie);
    assert!((lhs - rhs).abs() < 1e-6);
    // a left-invariant field along its own integral curve reproduces ∇ₓx
    let d = covariant_derivative_along(&nk, curve, |t| TangentVector::new(curve(t), a.clone()), t0, h).unwrap();
    assert!(close(&d.lie, &nk.levi_civita(&a, &a), 1e-7));
    assert!(covariant_derivative_along(&nk, curve, z, t0, 0.0).is_err());
}
