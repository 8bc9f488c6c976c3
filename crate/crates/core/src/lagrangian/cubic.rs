//! Maximization of the cubic form `F(v) = g(h(v,v),Jv)` on the unit sphere.

use alloc::vec;

use super::local::T3;
use crate::linalg;
use crate::structure::TangentVector;
use crate::Error;

/// Required `|∇F(v*) − 3F(v*)v*|` at the maximizer.
pub const CRITICAL_TOLERANCE: f64 = 1e-8;

const ASCENT_ITERATIONS: usize = 4000;
const NEWTON_ITERATIONS: usize = 50;

#[derive(Clone, Debug)]
pub struct CubicMax {
    pub direction: TangentVector<f64>,
    /// `F(v*) ≥ 0`.
    pub mu1: f64,
    /// `e₁ = v*`, and `e₂, e₃` diagonalize `h(e₁, ·)`.
    pub basis: [TangentVector<f64>; 3],
    pub critical_residual: f64,
    /// `max_{j≠k} |h(e₁,eⱼ,eₖ)|`.
    pub diagonal_residual: f64,
}

/// Frame-coordinate result of [`maximize`].
#[derive(Clone, Copy, Debug)]
pub(crate) struct RawMax {
    pub value: f64,
    pub basis: [[f64; 3]; 3],
    pub critical_residual: f64,
    pub diagonal_residual: f64,
}

pub fn value(h: &T3, v: &[f64; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                s += h[i][j][k] * v[i] * v[j] * v[k];
            }
        }
    }
    s
}

/// `h(u, v, ·)`.
fn contract2(h: &T3, u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    core::array::from_fn(|k| {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += h[i][j][k] * u[i] * v[j];
            }
        }
        s
    })
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = libm::sqrt(dot(&v, &v));
    v.map(|x| x / n)
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `|∇F(v) − 3F(v)v|` for unit `v`.
fn critical(h: &T3, v: &[f64; 3]) -> f64 {
    let g = contract2(h, v, v);
    let f = dot(&g, v);
    let r: [f64; 3] = core::array::from_fn(|k| 3.0 * (g[k] - f * v[k]));
    libm::sqrt(dot(&r, &r))
}

/// Newton on `h(v,v,·) = ℓv, |v|² = 1`.
fn polish(h: &T3, mut v: [f64; 3]) -> [f64; 3] {
    let mut l = value(h, &v);
    for _ in 0..NEWTON_ITERATIONS {
        let g = contract2(h, &v, &v);
        let r = [g[0] - l * v[0], g[1] - l * v[1], g[2] - l * v[2], 0.5 * (dot(&v, &v) - 1.0)];
        if r.iter().all(|x| x.abs() < 1e-16) {
            break;
        }
        let mut a = vec![vec![0.0; 4]; 4];
        for k in 0..3 {
            for m in 0..3 {
                let mut s = 0.0;
                for i in 0..3 {
                    s += 2.0 * h[i][m][k] * v[i];
                }
                a[k][m] = s - if k == m { l } else { 0.0 };
            }
            a[k][3] = -v[k];
            a[3][k] = v[k];
        }
        let Some(d) = linalg::solve(a, r.iter().map(|x| -x).collect()) else {
            break;
        };
        for k in 0..3 {
            v[k] += d[k];
        }
        l += d[3];
    }
    normalize(v)
}

pub(crate) fn maximize(h: &T3) -> Result<RawMax, Error> {
    let scale = h.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let identity = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    if scale < 1e-14 {
        return Ok(RawMax {
            value: 0.0,
            basis: identity,
            critical_residual: 0.0,
            diagonal_residual: scale,
        });
    }
    let eta = 0.1 / scale;
    let mut best: Option<([f64; 3], f64)> = None;
    for a in -1i32..=1 {
        for b in -1i32..=1 {
            for c in -1i32..=1 {
                if a == 0 && b == 0 && c == 0 {
                    continue;
                }
                let mut v = normalize([a as f64, b as f64, c as f64]);
                for _ in 0..ASCENT_ITERATIONS {
                    let g = contract2(h, &v, &v);
                    let f = dot(&g, &v);
                    let step: [f64; 3] = core::array::from_fn(|k| 3.0 * (g[k] - f * v[k]));
                    if dot(&step, &step) < 1e-12 * scale * scale {
                        break;
                    }
                    v = normalize(core::array::from_fn(|k| v[k] + eta * step[k]));
                }
                let v = polish(h, v);
                let f = value(h, &v);
                if best.map_or(true, |(_, bf)| f > bf) {
                    best = Some((v, f));
                }
            }
        }
    }
    let (v, f) = best.expect("26 starts");
    let crit = critical(h, &v);
    if !(crit < CRITICAL_TOLERANCE) || f < 0.0 {
        return Err(Error::NonConvergence {
            iterations: ASCENT_ITERATIONS + NEWTON_ITERATIONS,
        });
    }

    // orthonormal complement, then diagonalize h(v, ·, ·) on it
    let axis = (0..3)
        .min_by(|&i, &j| v[i].abs().partial_cmp(&v[j].abs()).unwrap_or(core::cmp::Ordering::Equal))
        .unwrap_or(0);
    let mut u = [0.0; 3];
    u[axis] = 1.0;
    let d = dot(&u, &v);
    let u = normalize(core::array::from_fn(|k| u[k] - d * v[k]));
    let w = cross(&v, &u);
    let huu = dot(&contract2(h, &v, &u), &u);
    let huw = dot(&contract2(h, &v, &u), &w);
    let hww = dot(&contract2(h, &v, &w), &w);
    let (_, r) = linalg::symmetric_eigen2([[huu, huw], [huw, hww]]);
    let e2: [f64; 3] = core::array::from_fn(|k| r[0][0] * u[k] + r[0][1] * w[k]);
    let e3 = cross(&v, &e2);
    let basis = [v, e2, e3];
    let mut diagonal: f64 = 0.0;
    for j in 0..3 {
        let hj = contract2(h, &v, &basis[j]);
        for (k, ek) in basis.iter().enumerate() {
            if j != k {
                diagonal = diagonal.max(dot(&hj, ek).abs());
            }
        }
    }
    Ok(RawMax {
        value: f,
        basis,
        critical_residual: crit,
        diagonal_residual: diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only_h123(c: f64) -> T3 {
        let mut h = [[[0.0; 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
            h[i][j][k] = c;
        }
        h
    }

    #[test]
    fn single_component_cubic() {
        // F = 6c·v₁v₂v₃, maximal 2|c|/√3 on a body diagonal
        for c in [0.25, -0.5] {
            let m = maximize(&only_h123(c)).unwrap();
            assert!((m.value - 2.0 * c.abs() / 3f64.sqrt()).abs() < 1e-12);
            assert!(m.diagonal_residual < 1e-10);
        }
    }
}
