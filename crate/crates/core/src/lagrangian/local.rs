//! Coordinate-basis geometry of an immersion at a chart point, from jets.
//!
//! Notation: `z_a` are the Lie coordinates of `∂ₐf`, `g_ab = g(z_a, z_b)`,
//! and `c_abc = g(h(∂a,∂b), J∂c)` is the cubic form.

use crate::dsl::ImmersionDescriptor;
use crate::jet::Jet;
use crate::linalg::{self, Mat3};
use crate::quaternion::Quaternion;
use crate::scalar::Field;
use crate::structure::{LiePair, NkStructure};
use crate::Error;

pub type T3 = [[[f64; 3]; 3]; 3];
pub type T4 = [[[[f64; 3]; 3]; 3]; 3];

/// Smallest admissible `det g_ab` relative to `(tr g_ab / 3)³`.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct LocalGeometry {
    pub z: [LiePair<f64>; 3],
    pub gram: Mat3,
    pub gram_inv: Mat3,
    /// `c_abc`.
    pub cubic: T3,
    /// `Γ^m_ab` stored as `[a][b][m]`.
    pub christoffel: [[[f64; 3]; 3]; 3],
    /// `g((∇h)(∂a,∂b,∂c), J∂d)`.
    pub nabla_cubic: T4,
    /// `g(R(∂a,∂b)∂c, ∂d)` of the induced metric, from its own jets.
    pub intrinsic_riemann: T4,
    /// `g(R⊥(∂a,∂b)J∂c, J∂d)` from the normal connection's jets.
    pub normal_curvature: T4,
    /// `max |Y_ab − Y_ba|`, zero up to rounding for an immersion.
    pub torsion_residual: f64,
}

fn value(x: &LiePair<Jet>) -> LiePair<f64> {
    LiePair::from_array(x.c.map(|j| j.value()))
}

fn partial(x: &LiePair<Jet>, a: usize) -> LiePair<Jet> {
    LiePair::from_array(x.c.map(|j| j.partial(a)))
}

fn inverse_quaternion(q: &Quaternion<Jet>) -> Quaternion<Jet> {
    let r = q.norm_sq().recip().unwrap_or(Jet::constant(f64::NAN));
    q.conj().scale(&r)
}

/// Lie coordinates of the coordinate fields, as jets valid to order two.
pub fn coordinate_fields(imm: &ImmersionDescriptor, at: [f64; 3]) -> [LiePair<Jet>; 3] {
    let (p, q) = imm.jets(at);
    let (pi, qi) = (inverse_quaternion(&p), inverse_quaternion(&q));
    core::array::from_fn(|a| {
        let dp = p.map(|c| c.partial(a));
        let dq = q.map(|c| c.partial(a));
        LiePair::new((pi.clone() * dp).im(), (qi.clone() * dq).im())
    })
}

fn inv3_jet(m: &[[Jet; 3]; 3]) -> Option<[[Jet; 3]; 3]> {
    linalg::inv3(m)
}

pub fn compute(
    nk: &NkStructure<Jet>,
    nkf: &NkStructure<f64>,
    imm: &ImmersionDescriptor,
    at: [f64; 3],
) -> Result<LocalGeometry, Error> {
    let zj = coordinate_fields(imm, at);
    let jzj: [LiePair<Jet>; 3] = core::array::from_fn(|a| nk.j(&zj[a]));
    let gram_j: [[Jet; 3]; 3] =
        core::array::from_fn(|a| core::array::from_fn(|b| nk.metric(&zj[a], &zj[b])));
    let gram: Mat3 = gram_j.map(|r| r.map(|x| x.value()));
    let scale = (gram[0][0] + gram[1][1] + gram[2][2]) / 3.0;
    let det = linalg::det3(&gram);
    if !(det > RANK_TOLERANCE * scale * scale * scale) {
        return Err(Error::DegenerateChart);
    }
    let ginv_j = inv3_jet(&gram_j).ok_or(Error::DegenerateChart)?;
    let gram_inv: Mat3 = ginv_j.map(|r| r.map(|x| x.value()));

    // Y_ab = ∇̃_{∂a}(∂b) in Lie coordinates, valid to order one
    let y: [[LiePair<Jet>; 3]; 3] = core::array::from_fn(|a| {
        core::array::from_fn(|b| partial(&zj[b], a) + nk.levi_civita(&zj[a], &zj[b]))
    });
    let mut torsion_residual: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            torsion_residual = torsion_residual.max((value(&y[a][b]) - value(&y[b][a])).max_abs());
        }
    }

    let cubic_j: [[[Jet; 3]; 3]; 3] = core::array::from_fn(|a| {
        core::array::from_fn(|b| core::array::from_fn(|c| nk.metric(&y[a][b], &jzj[c])))
    });
    let cubic: T3 = cubic_j.map(|m| m.map(|r| r.map(|x| x.value())));

    // Γ^m_ab = g^{md} g(Y_ab, z_d), at the point
    let mut christoffel = [[[0.0; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let low: [f64; 3] = core::array::from_fn(|d| {
                nk.metric(&y[a][b], &zj[d]).value()
            });
            for m in 0..3 {
                christoffel[a][b][m] = (0..3).map(|d| gram_inv[m][d] * low[d]).sum();
            }
        }
    }

    // g(Jz_n, G(z_a, z_d)) at the point
    let zf: [LiePair<f64>; 3] = core::array::from_fn(|a| value(&zj[a]));
    let jzf: [LiePair<f64>; 3] = core::array::from_fn(|a| value(&jzj[a]));
    let mut jg = [[[0.0; 3]; 3]; 3];
    for n in 0..3 {
        for a in 0..3 {
            for d in 0..3 {
                jg[n][a][d] = nkf.metric(&jzf[n], &nkf.tensor_g(&zf[a], &zf[d]));
            }
        }
    }
    let mut nabla_cubic = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut v = cubic_j[b][c][d].partial(a).value();
                    for m in 0..3 {
                        for n in 0..3 {
                            v -= gram_inv[m][n] * cubic[b][c][m] * jg[n][a][d];
                        }
                        v -= christoffel[a][d][m] * cubic[b][c][m];
                        v -= christoffel[a][b][m] * cubic[m][c][d];
                        v -= christoffel[a][c][m] * cubic[b][m][d];
                    }
                    nabla_cubic[a][b][c][d] = v;
                }
            }
        }
    }

    let intrinsic_riemann = metric_riemann(&gram_j, &ginv_j, &gram);
    let normal_curvature = normal_riemann(nk, &zj, &jzj, &ginv_j, &gram);

    Ok(LocalGeometry {
        z: zf,
        gram,
        gram_inv,
        cubic,
        christoffel,
        nabla_cubic,
        intrinsic_riemann,
        normal_curvature,
        torsion_residual,
    })
}

/// Riemann tensor of the metric `g_ab(x)` given as jets.
fn metric_riemann(g: &[[Jet; 3]; 3], ginv: &[[Jet; 3]; 3], gram: &Mat3) -> T4 {
    let half = 0.5;
    // Γ^m_ab as jets valid to order one
    let gamma: [[[Jet; 3]; 3]; 3] = core::array::from_fn(|a| {
        core::array::from_fn(|b| {
            let low: [Jet; 3] = core::array::from_fn(|c| {
                (g[b][c].partial(a) + g[a][c].partial(b) - g[a][b].partial(c)).scale(half)
            });
            core::array::from_fn(|m| {
                (0..3).fold(Jet::constant(0.0), |acc, c| acc + ginv[m][c] * low[c])
            })
        })
    });
    let gv = gamma.map(|m| m.map(|r| r.map(|x| x.value())));
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let mut up = [0.0; 3];
                for (d, u) in up.iter_mut().enumerate() {
                    let mut v = gamma[b][c][d].partial(a).value() - gamma[a][c][d].partial(b).value();
                    for e in 0..3 {
                        v += gv[b][c][e] * gv[a][e][d] - gv[a][c][e] * gv[b][e][d];
                    }
                    *u = v;
                }
                for d in 0..3 {
                    out[a][b][c][d] = (0..3).map(|e| up[e] * gram[e][d]).sum();
                }
            }
        }
    }
    out
}

/// `g(R⊥(∂i,∂j)J∂a, J∂b)` from the normal connection
/// `∇⊥_{∂i} J∂a = Σ_b N_ia^b J∂b`.
fn normal_riemann(
    nk: &NkStructure<Jet>,
    z: &[LiePair<Jet>; 3],
    jz: &[LiePair<Jet>; 3],
    ginv: &[[Jet; 3]; 3],
    gram: &Mat3,
) -> T4 {
    let n: [[[Jet; 3]; 3]; 3] = core::array::from_fn(|i| {
        core::array::from_fn(|a| {
            let d = partial(&jz[a], i) + nk.levi_civita(&z[i], &jz[a]);
            let low: [Jet; 3] = core::array::from_fn(|c| nk.metric(&d, &jz[c]));
            core::array::from_fn(|b| (0..3).fold(Jet::constant(0.0), |acc, c| acc + ginv[b][c] * low[c]))
        })
    });
    let nv = n.map(|m| m.map(|r| r.map(|x| x.value())));
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..3 {
                let mut up = [0.0; 3];
                for (b, u) in up.iter_mut().enumerate() {
                    let mut v = n[j][a][b].partial(i).value() - n[i][a][b].partial(j).value();
                    for c in 0..3 {
                        v += nv[j][a][c] * nv[i][c][b] - nv[i][a][c] * nv[j][c][b];
                    }
                    *u = v;
                }
                for b in 0..3 {
                    out[i][j][a][b] = (0..3).map(|e| up[e] * gram[e][b]).sum();
                }
            }
        }
    }
    out
}

/// Re-expresses a covariant 3-tensor in the frame `e_i = Σ_a E[i][a] z_a`.
pub fn to_frame3(t: &T3, e: &Mat3) -> T3 {
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut v = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            v += e[i][a] * e[j][b] * e[k][c] * t[a][b][c];
                        }
                    }
                }
                out[i][j][k] = v;
            }
        }
    }
    out
}

pub fn to_frame4(t: &T4, e: &Mat3) -> T4 {
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut v = 0.0;
                    for a in 0..3 {
                        for b in 0..3 {
                            for c in 0..3 {
                                for d in 0..3 {
                                    v += e[i][a] * e[j][b] * e[k][c] * e[l][d] * t[a][b][c][d];
                                }
                            }
                        }
                    }
                    out[i][j][k][l] = v;
                }
            }
        }
    }
    out
}
