//! Orthonormal frames, the adapted frame `Peᵢ = λᵢeᵢ + μᵢJeᵢ`, and
//! continuation of adapted frames to nearby points.

use core::f64::consts::PI;

use crate::linalg::{self, Mat3};
use crate::scalar::SQRT_3;
use crate::structure::{combine, LiePair, NkStructure};
use crate::Error;

/// Eigenvalues of `T` closer than this are treated as one cluster.
pub const CLUSTER_GAP: f64 = 1e-7;
/// Accepted `max |Peᵢ − λᵢeᵢ − μᵢJeᵢ|`.
pub const ADAPTED_TOLERANCE: f64 = 1e-8;
/// Angles this close (mod π) make the frame degenerate.
pub const ANGLE_DEGENERACY: f64 = 1e-6;
/// Angles within this of π are identified with 0.
const BRANCH_SNAP: f64 = 1e-9;

/// Gram–Schmidt under `g`.
pub fn gram_schmidt(nk: &NkStructure<f64>, v: &[LiePair<f64>; 3]) -> Option<[LiePair<f64>; 3]> {
    let mut out: [LiePair<f64>; 3] = core::array::from_fn(|_| LiePair::zero());
    for i in 0..3 {
        let mut w = v[i].clone();
        for u in out.iter().take(i) {
            w = w - u.scale(&nk.metric(&v[i], u));
        }
        // second pass for orthogonality to rounding
        for u in out.iter().take(i) {
            let c = nk.metric(&w, u);
            w = w - u.scale(&c);
        }
        let n = libm::sqrt(nk.metric(&w, &w));
        if !(n > 1e-12) {
            return None;
        }
        out[i] = w.scale(&(1.0 / n));
    }
    Some(out)
}

/// Circular distance of two angles modulo π.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Reduces an angle to `(−π/2, π/2]` modulo π.
pub fn wrap_half(a: f64) -> f64 {
    let r = (a + PI / 2.0).rem_euclid(PI) - PI / 2.0;
    if r <= -PI / 2.0 {
        r + PI
    } else {
        r
    }
}

/// The angle `θ ∈ [0, π)` with `(cos 2θ, sin 2θ) ∝ (λ, μ)`.
pub fn angle_of(lambda: f64, mu: f64) -> f64 {
    let t = 0.5 * libm::atan2(mu, lambda);
    let t = if t < 0.0 { t + PI } else { t };
    if t > PI - BRANCH_SNAP {
        0.0
    } else {
        t
    }
}

#[derive(Clone, Debug)]
pub struct Adapted {
    pub e: [LiePair<f64>; 3],
    pub theta: [f64; 3],
    pub lambda: [f64; 3],
    pub mu: [f64; 3],
    /// Two angles agree modulo π, so the frame is not unique.
    pub degenerate: bool,
    pub p_residual: f64,
    pub orientation_residual: f64,
}

pub fn lambda_mu(nk: &NkStructure<f64>, e: &LiePair<f64>) -> (f64, f64) {
    let pe = nk.p(e);
    (nk.metric(&pe, e), nk.metric(&pe, &nk.j(e)))
}

/// `max |Peᵢ − λᵢeᵢ − μᵢJeᵢ|` in Lie coordinates.
fn p_residual(nk: &NkStructure<f64>, e: &[LiePair<f64>; 3], l: &[f64; 3], m: &[f64; 3]) -> f64 {
    (0..3)
        .map(|i| {
            (nk.p(&e[i]) - e[i].scale(&l[i]) - nk.j(&e[i]).scale(&m[i])).max_abs()
        })
        .fold(0.0, f64::max)
}

/// `max |√3 J G(eᵢ,eⱼ) − Σₖ εᵢⱼᵏ eₖ|`.
pub fn orientation_residual(nk: &NkStructure<f64>, e: &[LiePair<f64>; 3]) -> f64 {
    let mut r: f64 = 0.0;
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let v = nk.j(&nk.tensor_g(&e[i], &e[j])).scale(&SQRT_3);
        r = r.max((v - e[k].clone()).max_abs());
    }
    r
}

fn sym(m: &Mat3) -> Mat3 {
    core::array::from_fn(|i| core::array::from_fn(|j| 0.5 * (m[i][j] + m[j][i])))
}

/// Joint eigenbasis of the commuting symmetric pair `(T, S)`, as rows of
/// coefficients in the input frame.
fn joint_eigenbasis(t: &Mat3, s: &Mat3) -> Mat3 {
    let (vals, mut u) = linalg::symmetric_eigen3(t);
    let mut start = 0;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && (vals[end] - vals[end - 1]).abs() < CLUSTER_GAP {
            end += 1;
        }
        let k = end - start;
        if k > 1 {
            // restriction of S to the cluster, in the basis u[start..end]
            let su = |a: usize, b: usize| -> f64 {
                let mut v = 0.0;
                for p in 0..3 {
                    for q in 0..3 {
                        v += u[start + a][p] * s[p][q] * u[start + b][q];
                    }
                }
                v
            };
            let rot: alloc::vec::Vec<alloc::vec::Vec<f64>> = if k == 2 {
                let (_, w) = linalg::symmetric_eigen2([[su(0, 0), su(0, 1)], [su(1, 0), su(1, 1)]]);
                w.iter().map(|r| r.to_vec()).collect()
            } else {
                let m: Mat3 = core::array::from_fn(|a| core::array::from_fn(|b| su(a, b)));
                let (_, w) = linalg::symmetric_eigen3(&sym(&m));
                w.iter().map(|r| r.to_vec()).collect()
            };
            let old: alloc::vec::Vec<[f64; 3]> = (start..end).map(|r| u[r]).collect();
            for (a, row) in rot.iter().enumerate() {
                u[start + a] = core::array::from_fn(|p| (0..k).map(|b| row[b] * old[b][p]).sum());
            }
        }
        start = end;
    }
    u
}

/// Adapted frame from an orthonormal tangent frame of a Lagrangian point.
pub fn adapt(nk: &NkStructure<f64>, f: &[LiePair<f64>; 3]) -> Result<Adapted, Error> {
    let t: Mat3 = sym(&core::array::from_fn(|i| {
        core::array::from_fn(|j| nk.metric(&nk.p(&f[i]), &f[j]))
    }));
    let s: Mat3 = sym(&core::array::from_fn(|i| {
        core::array::from_fn(|j| nk.metric(&nk.p(&f[i]), &nk.j(&f[j])))
    }));
    let u = joint_eigenbasis(&t, &s);
    let mut e: [LiePair<f64>; 3] = core::array::from_fn(|i| {
        combine(&[(u[i][0], &f[0]), (u[i][1], &f[1]), (u[i][2], &f[2])])
    });
    let mut lm: [(f64, f64); 3] = core::array::from_fn(|i| lambda_mu(nk, &e[i]));
    let mut theta: [f64; 3] = core::array::from_fn(|i| angle_of(lm[i].0, lm[i].1));

    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| theta[a].partial_cmp(&theta[b]).unwrap_or(core::cmp::Ordering::Equal));
    e = order.map(|i| e[i].clone());
    lm = order.map(|i| lm[i]);
    theta = order.map(|i| theta[i]);

    if nk.metric(&nk.j(&nk.tensor_g(&e[0], &e[1])), &e[2]) < 0.0 {
        e[2] = -e[2].clone();
    }
    for (i, other) in [(0usize, 2usize), (1, 2)] {
        let lead = e[i]
            .c
            .iter()
            .copied()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if lead < 0.0 {
            e[i] = -e[i].clone();
            e[other] = -e[other].clone();
        }
    }

    let lambda = lm.map(|x| x.0);
    let mu = lm.map(|x| x.1);
    let p_res = p_residual(nk, &e, &lambda, &mu);
    if !(p_res < ADAPTED_TOLERANCE) {
        return Err(Error::Integrity {
            what: "joint diagonalization of P",
            residual: p_res,
        });
    }
    let degenerate = (0..3).any(|i| {
        (i + 1..3).any(|j| angle_distance(theta[i], theta[j]) < ANGLE_DEGENERACY)
    });
    Ok(Adapted {
        orientation_residual: orientation_residual(nk, &e),
        e,
        theta,
        lambda,
        mu,
        degenerate,
        p_residual: p_res,
    })
}

/// Adapted frame at a nearby point, continued from `center`: vectors are
/// matched by overlap and sign, and inside an angle cluster of `center` the
/// center vectors are projected onto the nearby cluster eigenspace.
/// Returns `None` when the match is ambiguous.
pub fn continue_frame(
    nk: &NkStructure<f64>,
    center: &Adapted,
    near: &Adapted,
) -> Option<[LiePair<f64>; 3]> {
    let mut out: [LiePair<f64>; 3] = core::array::from_fn(|_| LiePair::zero());
    let mut done = [false; 3];
    for j in 0..3 {
        if done[j] {
            continue;
        }
        let cluster: alloc::vec::Vec<usize> = (0..3)
            .filter(|&k| angle_distance(center.theta[j], center.theta[k]) < ANGLE_DEGENERACY)
            .collect();
        if cluster.len() == 1 {
            let (best, ov) = (0..3)
                .map(|k| (k, nk.metric(&center.e[j], &near.e[k])))
                .fold((0usize, 0.0f64), |acc, x| if x.1.abs() > acc.1.abs() { x } else { acc });
            if ov.abs() < 0.9 {
                return None;
            }
            out[j] = if ov < 0.0 { -near.e[best].clone() } else { near.e[best].clone() };
            done[j] = true;
            continue;
        }
        // nearby vectors spanning the same eigenspace
        let span: alloc::vec::Vec<usize> = (0..3)
            .filter(|&k| angle_distance(near.theta[k], center.theta[j]) < 1e-3)
            .collect();
        if span.len() != cluster.len() {
            return None;
        }
        let projected: alloc::vec::Vec<LiePair<f64>> = cluster
            .iter()
            .map(|&c| {
                span.iter().fold(LiePair::zero(), |acc, &k| {
                    acc + near.e[k].scale(&nk.metric(&center.e[c], &near.e[k]))
                })
            })
            .collect();
        // Gram–Schmidt in cluster order
        for (n, &c) in cluster.iter().enumerate() {
            let mut w = projected[n].clone();
            for &prev in cluster.iter().take(n) {
                let d = nk.metric(&w, &out[prev]);
                w = w - out[prev].scale(&d);
            }
            let len = libm::sqrt(nk.metric(&w, &w));
            if !(len > 0.5) {
                return None;
            }
            out[c] = w.scale(&(1.0 / len));
            done[c] = true;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_helpers() {
        assert_eq!(angle_of(1.0, 0.0), 0.0);
        assert!((angle_of(-0.5, 0.75f64.sqrt()) - PI / 3.0).abs() < 1e-15);
        assert!((angle_of(-0.5, -0.75f64.sqrt()) - 2.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(angle_of(1.0, -1e-12), 0.0);
        assert!(angle_distance(0.01, PI - 0.01) < 0.0201);
        assert!((wrap_half(PI - 0.1) + 0.1).abs() < 1e-15);
    }
}
