//! Tensors and identities at one point, in the adapted frame.
//!
//! Tangent vectors are passed as Lie coordinates; `h`, `∇h`, `R` and `R⊥`
//! are evaluated on them through their frame components.

use alloc::vec::Vec;

use super::cubic::{self, CubicMax};
use super::local::{self, LocalGeometry, T4};
use super::{
    frame, levi_civita_symbol, max_abs4, sphere, AdaptedFrame, ConnectionCoeffs, NablaH,
    SecondFundamentalForm,
};
use crate::linalg::Mat3;
use crate::scalar::SQRT_3;
use crate::structure::{combine, LiePair, NkStructure, TangentVector};
use crate::Error;

/// Residuals of `R(X,Y,Z,W) − g(R⊥(X,Y)JZ,JW) − (1/3)(g(X,W)g(Y,Z) − g(X,Z)·last)`
/// with `last = g(Y,W)` and with the variant `last = g(X,W)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureSplitResiduals {
    pub y_w: f64,
    pub x_w: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleReport {
    /// Distance of `θ₁+θ₂+θ₃` from `πℤ`.
    pub angle_sum: f64,
    /// `max |eᵢ(θⱼ) + h_jj^i|`.
    pub angle_derivative: f64,
    /// `max_{j≠k} |h_ij^k cos(θⱼ−θₖ) − ((√3/6)ε_ij^k − ω_ij^k) sin(θⱼ−θₖ)|`.
    pub angle_coupling: f64,
}

impl AngleReport {
    pub fn max(&self) -> f64 {
        self.angle_sum.max(self.angle_derivative).max(self.angle_coupling)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropyReport {
    /// Constant value of `|h(v,v)|²`, when constant.
    pub mu: Option<f64>,
    /// Constant value of `g((∇h)(v,v,v),Jv)`, when constant.
    pub lambda: Option<f64>,
    /// Half the spread of the sampled values.
    pub max_deviation: f64,
    pub samples: usize,
}

/// Residuals of the three angle relations obtained from the `λ`-identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleRelations {
    /// `λ − (1/6)(λᵢμⱼ − λⱼμᵢ + λᵢμₖ − λₖμᵢ)` for `(i,j,k)` cyclic.
    pub relations: [f64; 3],
    /// `λ − (1/3)cos(θₖ−θⱼ)sin(θₖ+θⱼ−2θᵢ)`, the same relations in product form.
    pub products: [f64; 3],
    /// Sum of the three `(1/6)(…)` expressions, identically zero.
    pub sum: f64,
}

impl AngleRelations {
    pub fn max(&self) -> f64 {
        self.relations
            .iter()
            .chain(self.products.iter())
            .fold(self.sum.abs(), |m, x| m.max(x.abs()))
    }
}

pub fn angle_relations_check(theta: [f64; 3], lambda: f64) -> AngleRelations {
    let l = theta.map(|t| libm::cos(2.0 * t));
    let m = theta.map(|t| libm::sin(2.0 * t));
    let mut relations = [0.0; 3];
    let mut products = [0.0; 3];
    let mut sum = 0.0;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let expr = (l[i] * m[j] - l[j] * m[i] + l[i] * m[k] - l[k] * m[i]) / 6.0;
        sum += expr;
        relations[i] = lambda - expr;
        products[i] = lambda
            - libm::cos(theta[k] - theta[j]) * libm::sin(theta[k] + theta[j] - 2.0 * theta[i]) / 3.0;
    }
    AngleRelations {
        relations,
        products,
        sum,
    }
}

/// Induced geometry at one chart point; see [`super::Analyzer::analyze`].
#[derive(Clone, Debug)]
pub struct PointGeometry<'a> {
    nk: &'a NkStructure<f64>,
    pub frame: AdaptedFrame,
    pub local: LocalGeometry,
    pub h: SecondFundamentalForm,
    pub omega: ConnectionCoeffs,
    pub nabla_h: NablaH,
    /// `eᵢ(θⱼ)` as `[i][j]`.
    pub angle_derivatives: [[f64; 3]; 3],
    /// `g(R(eᵢ,eⱼ)eₖ, eₗ)` from the Gauss equation.
    pub riemann: T4,
    /// The same, from the induced metric's own Christoffel symbols.
    pub intrinsic_riemann: T4,
    /// `g(R⊥(eᵢ,eⱼ)Jeₖ, Jeₗ)` from the normal connection.
    pub normal_curvature: T4,
    e: [LiePair<f64>; 3],
    je: [LiePair<f64>; 3],
}

type V = LiePair<f64>;

impl<'a> PointGeometry<'a> {
    pub(crate) fn new(
        nk: &'a NkStructure<f64>,
        frame: AdaptedFrame,
        local: LocalGeometry,
        h: SecondFundamentalForm,
        omega: ConnectionCoeffs,
        nabla_h: NablaH,
        dtheta_chart: [[f64; 3]; 3],
    ) -> Self {
        let e = frame.frame.frame_lie();
        let je = e.clone().map(|v| nk.j(&v));
        let em: Mat3 = core::array::from_fn(|i| {
            let low: [f64; 3] = core::array::from_fn(|b| nk.metric(&e[i], &local.z[b]));
            core::array::from_fn(|a| (0..3).map(|b| low[b] * local.gram_inv[b][a]).sum())
        });
        let angle_derivatives =
            core::array::from_fn(|i| core::array::from_fn(|j| (0..3).map(|a| em[i][a] * dtheta_chart[a][j]).sum()));
        let hc = &h.coefficients;
        let mut riemann = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let hh: f64 = (0..3).map(|m| hc[i][l][m] * hc[j][k][m] - hc[i][k][m] * hc[j][l][m]).sum();
                        riemann[i][j][k][l] = nk.curvature4(&e[i], &e[j], &e[k], &e[l]) + hh;
                    }
                }
            }
        }
        Self {
            intrinsic_riemann: local::to_frame4(&local.intrinsic_riemann, &em),
            normal_curvature: local::to_frame4(&local.normal_curvature, &em),
            nk,
            frame,
            local,
            h,
            omega,
            nabla_h,
            angle_derivatives,
            riemann,
            e,
            je,
        }
    }

    pub fn structure(&self) -> &NkStructure<f64> {
        self.nk
    }

    pub fn frame_vectors(&self) -> &[LiePair<f64>; 3] {
        &self.e
    }

    /// `Σ cᵢeᵢ`.
    pub fn vector(&self, c: [f64; 3]) -> V {
        combine(&[(c[0], &self.e[0]), (c[1], &self.e[1]), (c[2], &self.e[2])])
    }

    /// `Σ cᵢJeᵢ`.
    pub fn normal_vector(&self, c: [f64; 3]) -> V {
        combine(&[(c[0], &self.je[0]), (c[1], &self.je[1]), (c[2], &self.je[2])])
    }

    /// `(g(v,eᵢ))ᵢ`.
    pub fn coords(&self, v: &V) -> [f64; 3] {
        core::array::from_fn(|i| self.nk.metric(v, &self.e[i]))
    }

    /// `(g(ξ,Jeᵢ))ᵢ`.
    pub fn normal_coords(&self, xi: &V) -> [f64; 3] {
        core::array::from_fn(|i| self.nk.metric(xi, &self.je[i]))
    }

    fn g(&self, x: &V, y: &V) -> f64 {
        self.nk.metric(x, y)
    }

    /// `h(X,Y)`, a normal vector.
    pub fn h_vec(&self, x: &V, y: &V) -> V {
        let (a, b) = (self.coords(x), self.coords(y));
        let hc = &self.h.coefficients;
        self.normal_vector(core::array::from_fn(|k| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += hc[i][j][k] * a[i] * b[j];
                }
            }
            s
        }))
    }

    /// `(∇h)(X,Y,Z)`, a normal vector.
    pub fn nabla_h_vec(&self, x: &V, y: &V, z: &V) -> V {
        let (a, b, c) = (self.coords(x), self.coords(y), self.coords(z));
        let t = &self.nabla_h.coefficients;
        self.normal_vector(core::array::from_fn(|l| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        s += t[i][j][k][l] * a[i] * b[j] * c[k];
                    }
                }
            }
            s
        }))
    }

    fn eval4(t: &T4, a: &[f64; 3], b: &[f64; 3], c: &[f64; 3], d: &[f64; 3]) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        s += t[i][j][k][l] * a[i] * b[j] * c[k] * d[l];
                    }
                }
            }
        }
        s
    }

    /// `R(X,Y)Z` of the induced metric, from the Gauss equation.
    pub fn riemann_vec(&self, x: &V, y: &V, z: &V) -> V {
        let (a, b, c) = (self.coords(x), self.coords(y), self.coords(z));
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        self.vector(core::array::from_fn(|l| Self::eval4(&self.riemann, &a, &b, &c, &id[l])))
    }

    /// `R⊥(X,Y)ξ` from the Gauss-side curvature via
    /// `g(R⊥(X,Y)JZ,JW) = R(X,Y,Z,W) − (1/3)(g(X,W)g(Y,Z) − g(X,Z)g(Y,W))`.
    pub fn normal_curvature_vec(&self, x: &V, y: &V, xi: &V) -> V {
        let (a, b) = (self.coords(x), self.coords(y));
        let n = self.normal_coords(xi);
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        self.normal_vector(core::array::from_fn(|l| {
            let w = &id[l];
            Self::eval4(&self.riemann, &a, &b, &n, w) - (a[l] * dot3(&b, &n) - dot3(&a, &n) * b[l]) / 3.0
        }))
    }

    /// `K(X,Y) = R(X,Y,Y,X)/(g(X,X)g(Y,Y) − g(X,Y)²)`.
    pub fn sectional_curvature(&self, x: &V, y: &V) -> Result<f64, Error> {
        let (a, b) = (self.coords(x), self.coords(y));
        let den = dot3(&a, &a) * dot3(&b, &b) - dot3(&a, &b) * dot3(&a, &b);
        if !(den > 1e-12 * dot3(&a, &a) * dot3(&b, &b)) {
            return Err(Error::DegeneratePlane);
        }
        Ok(Self::eval4(&self.riemann, &a, &b, &b, &a) / den)
    }

    /// Gauss equation against the metric's own curvature.
    pub fn gauss_residual(&self) -> f64 {
        max_diff4(&self.riemann, &self.intrinsic_riemann)
    }

    /// `g(R⊥(eᵢ,eⱼ)Jeₖ,Jeₗ) = R̃(eᵢ,eⱼ,Jeₖ,Jeₗ) + g([A_{Jeₖ},A_{Jeₗ}]eᵢ,eⱼ)`
    /// against the normal connection's curvature.
    pub fn ricci_residual(&self) -> f64 {
        let hc = &self.h.coefficients;
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let comm: f64 = (0..3).map(|m| hc[l][i][m] * hc[k][m][j] - hc[k][i][m] * hc[l][m][j]).sum();
                        let v = self.nk.curvature4(&self.e[i], &self.e[j], &self.je[k], &self.je[l]) + comm;
                        r = r.max((v - self.normal_curvature[i][j][k][l]).abs());
                    }
                }
            }
        }
        r
    }

    /// Both readings of the Gauss–Ricci combination, with `R` and `R⊥` from
    /// the induced metric and the normal connection.
    pub fn curvature_split_residuals(&self) -> CurvatureSplitResiduals {
        let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        let mut out = CurvatureSplitResiduals { y_w: 0.0, x_w: 0.0 };
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    for w in 0..3 {
                        let base = self.intrinsic_riemann[x][y][z][w] - self.normal_curvature[x][y][z][w];
                        let yw = base - (d(x, w) * d(y, z) - d(x, z) * d(y, w)) / 3.0;
                        let xw = base - (d(x, w) * d(y, z) - d(x, z) * d(x, w)) / 3.0;
                        out.y_w = out.y_w.max(yw.abs());
                        out.x_w = out.x_w.max(xw.abs());
                    }
                }
            }
        }
        out
    }

    /// `R⊥` from the Gauss-side formula against the Ricci equation.
    pub fn normal_curvature_cross_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let v = self.normal_curvature_vec(&self.e[i], &self.e[j], &self.je[k]);
                    let n = self.normal_coords(&v);
                    for (l, nl) in n.iter().enumerate() {
                        r = r.max((nl - self.normal_curvature[i][j][k][l]).abs());
                    }
                }
            }
        }
        r
    }

    /// `(∇h)(eᵢ,eⱼ,eₖ) − (∇h)(eⱼ,eᵢ,eₖ) = (R̃(eᵢ,eⱼ)eₖ)⊥`.
    pub fn codazzi_residual(&self) -> f64 {
        let t = &self.nabla_h.coefficients;
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let rc = self.nk.curvature(&self.e[i], &self.e[j], &self.e[k]);
                    for l in 0..3 {
                        let v = t[i][j][k][l] - t[j][i][k][l] - self.g(&rc, &self.je[l]);
                        r = r.max(v.abs());
                    }
                }
            }
        }
        r
    }

    /// `g((∇h)(X,Y,Z),JW) − g((∇h)(X,Y,W),JZ) = g(h(X,Y),G(W,Z))`.
    pub fn nabla_h_skew_residual(&self) -> f64 {
        let t = &self.nabla_h.coefficients;
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let hij = self.h_vec(&self.e[i], &self.e[j]);
                for k in 0..3 {
                    for l in 0..3 {
                        let gwz = self.nk.tensor_g(&self.e[l], &self.e[k]);
                        r = r.max((t[i][j][k][l] - t[i][j][l][k] - self.g(&hij, &gwz)).abs());
                    }
                }
            }
        }
        r
    }

    fn report(values: impl Iterator<Item = f64>, tol: f64) -> (Option<f64>, f64, usize) {
        let (mut lo, mut hi, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
            n += 1;
        }
        let dev = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        (if dev <= tol { Some(mid) } else { None }, dev, n)
    }

    /// Constancy of `|h(v,v)|²` over unit `v`.
    pub fn isotropy_mu(&self, n_samples: usize, tol: f64) -> IsotropyReport {
        let hc = &self.h.coefficients;
        let dirs = sphere::sample_directions(n_samples);
        let (mu, max_deviation, samples) = Self::report(
            dirs.iter().map(|v| {
                (0..3)
                    .map(|k| {
                        let mut s = 0.0;
                        for i in 0..3 {
                            for j in 0..3 {
                                s += hc[i][j][k] * v[i] * v[j];
                            }
                        }
                        s * s
                    })
                    .sum::<f64>()
            }),
            tol,
        );
        IsotropyReport {
            mu: mu.map(|m| m.max(0.0)),
            lambda: None,
            max_deviation,
            samples,
        }
    }

    /// Constancy of `g((∇h)(v,v,v),Jv)` over unit `v`.
    pub fn j_isotropy_lambda(&self, n_samples: usize, tol: f64) -> IsotropyReport {
        let t = &self.nabla_h.coefficients;
        let dirs = sphere::sample_directions(n_samples);
        let (lambda, max_deviation, samples) =
            Self::report(dirs.iter().map(|v| Self::eval4(t, v, v, v, v)), tol);
        IsotropyReport {
            mu: None,
            lambda,
            max_deviation,
            samples,
        }
    }

    /// Left side of the polarized J-isotropy condition at `(Y,Z,W,V)`.
    pub fn polarized_value(&self, lambda: f64, y: &V, z: &V, w: &V, v: &V) -> f64 {
        let nk = self.nk;
        let g = |a: &V, b: &V| nk.metric(a, b);
        let t1 = 12.0 * g(&self.nabla_h_vec(y, z, w), &nk.j(v));
        let t2 = 3.0
            * (g(&self.h_vec(y, z), &nk.tensor_g(w, v))
                + g(&self.h_vec(z, w), &nk.tensor_g(y, v))
                + g(&self.h_vec(w, y), &nk.tensor_g(z, v)));
        let (py, pjy) = (nk.p(y), nk.pj(y));
        let mut t3 = 0.0;
        let mut t4 = 0.0;
        for (a, b, c) in [(z, w, v), (w, v, z), (v, z, w)] {
            t3 += g(&py, a) * g(&nk.pj(b), c) - g(&pjy, a) * g(&nk.p(b), c);
            t4 += g(y, a) * g(b, c);
        }
        t1 + t2 + 2.0 * t3 - 4.0 * lambda * t4
    }

    /// Maximum of [`Self::polarized_value`] over all frame 4-tuples and the
    /// given extra tuples (frame coordinates).
    pub fn polarized_residual(&self, lambda: f64, extra: &[[[f64; 3]; 4]]) -> f64 {
        let mut r: f64 = 0.0;
        for y in 0..3 {
            for z in 0..3 {
                for w in 0..3 {
                    for v in 0..3 {
                        let val = self.polarized_value(lambda, &self.e[y], &self.e[z], &self.e[w], &self.e[v]);
                        r = r.max(val.abs());
                    }
                }
            }
        }
        for t in extra {
            let [y, z, w, v] = t.map(|c| self.vector(c));
            r = r.max(self.polarized_value(lambda, &y, &z, &w, &v).abs());
        }
        r
    }

    /// The five-vector tensor `𝐈(X,Y,Z,W,V)` with constant `λ`.
    pub fn i_tensor(&self, x: &V, y: &V, z: &V, w: &V, v: &V) -> f64 {
        let mut s = 0.0;
        for (a, b, c) in [(z, w, v), (w, v, z), (v, z, w)] {
            s += self.i_summand(x, y, a, b, c);
        }
        s
    }

    fn i_summand(&self, x: &V, y: &V, z: &V, w: &V, v: &V) -> f64 {
        let nk = self.nk;
        let g = |a: &V, b: &V| nk.metric(a, b);
        let h = |a: &V, b: &V| self.h_vec(a, b);
        let dp = |a: &V, b: &V| nk.nabla_p(a, b).0;
        let dpj = |a: &V, b: &V| nk.nabla_p(a, b).1;
        let (px, py, pw) = (nk.p(x), nk.p(y), nk.p(w));
        let (pjx, pjy, pjw) = (nk.pj(x), nk.pj(y), nk.pj(w));
        let hxy = h(x, y);
        let (phxy, pjhxy) = (nk.p(&hxy), nk.pj(&hxy));

        let mut s = 0.0;
        s += g(&py, &h(x, z)) * g(&pjw, v);
        s += g(&(dp(x, y) + phxy.clone()), z) * g(&pjw, v);
        s += g(&py, z) * g(&pjw, &h(x, v));
        s += g(&py, z) * g(&(dpj(x, w) + nk.pj(&h(x, w))), v);
        s -= g(&px, &h(y, z)) * g(&pjw, v);
        s -= g(&(dp(y, x) + phxy), z) * g(&pjw, v);
        s -= g(&px, z) * g(&pjw, &h(y, v));
        s -= g(&px, z) * g(&(dpj(y, w) + nk.pj(&h(y, w))), v);
        s -= g(&pjy, &h(x, z)) * g(&pw, v);
        s -= g(&(dpj(x, y) + pjhxy.clone()), z) * g(&pw, v);
        s -= g(&pjy, z) * g(&pw, &h(x, v));
        s -= g(&pjy, z) * g(&(dp(x, w) + nk.p(&h(x, w))), v);
        s += g(&pjx, &h(y, z)) * g(&pw, v);
        s += g(&(dpj(y, x) + pjhxy), z) * g(&pw, v);
        s += g(&pjx, z) * g(&pw, &h(y, v));
        s += g(&pjx, z) * g(&(dp(y, w) + nk.p(&h(y, w))), v);
        s
    }

    /// The five groups of the second-order J-isotropy identity at
    /// `(X,Y,Z,W,V)`; the identity asserts that they sum to zero.
    pub fn second_order_terms(&self, x: &V, y: &V, z: &V, w: &V, v: &V) -> [f64; 5] {
        let nk = self.nk;
        let g = |a: &V, b: &V| nk.metric(a, b);
        let jv = nk.j(v);
        let rxy = |a: &V| self.riemann_vec(x, y, a);
        let t1 = 12.0
            * g(
                &(self.normal_curvature_vec(x, y, &self.h_vec(z, w))
                    - self.h_vec(&rxy(z), w)
                    - self.h_vec(z, &rxy(w))),
                &jv,
            );
        let t2 = 9.0
            * (g(&self.nabla_h_vec(y, z, w), &nk.tensor_g(x, v)) - g(&self.nabla_h_vec(x, z, w), &nk.tensor_g(y, v)));
        let t3 = 3.0 * g(&self.h_vec(y, z), &nk.j(w)) * g(x, v) - 3.0 * g(&self.h_vec(x, z), &nk.j(w)) * g(y, v);
        let mut t4 = 0.0;
        for (a, b) in [(z, w), (w, z)] {
            let gbv = nk.tensor_g(b, v);
            t4 += g(&self.h_vec(x, a), &jv) * g(y, b) - g(&self.h_vec(y, a), &jv) * g(x, b)
                + g(&nk.p(y), a) * g(&nk.p(x), &gbv)
                - g(&nk.p(x), a) * g(&nk.p(y), &gbv)
                + g(&nk.jp(y), a) * g(&nk.jp(x), &gbv)
                - g(&nk.jp(x), a) * g(&nk.jp(y), &gbv);
        }
        let t5 = 2.0 * self.i_tensor(x, y, z, w, v);
        [t1, t2, t3, t4, t5]
    }

    /// Maximum of the second-order identity over all frame 5-tuples.
    ///
    /// Requires a constant `λ` over `n_samples` directions first; the terms
    /// differentiating `λ` are dropped.
    pub fn second_order_residual(&self, n_samples: usize) -> Result<f64, Error> {
        let iso = self.j_isotropy_lambda(n_samples, 1e-6);
        if iso.lambda.is_none() {
            return Err(Error::LambdaUnavailable {
                variation: iso.max_deviation,
            });
        }
        let e = &self.e;
        let mut r: f64 = 0.0;
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    for w in 0..3 {
                        for v in 0..3 {
                            let t = self.second_order_terms(&e[x], &e[y], &e[z], &e[w], &e[v]);
                            r = r.max(t.iter().sum::<f64>().abs());
                        }
                    }
                }
            }
        }
        Ok(r)
    }

    /// `𝐈(e₂,e₁,e₁,e₁,e₃)` against its reduction
    /// `−[1+2(λ₁λ₃+μ₁μ₃)+(λ₁λ₂+μ₁μ₂)]h₁₂³ + (λ₁μ₂−λ₂μ₁)/(2√3)`.
    pub fn i_reduction_residual(&self) -> f64 {
        let e = &self.e;
        let i = self.i_tensor(&e[1], &e[0], &e[0], &e[0], &e[2]);
        (i - self.i_reduced()).abs()
    }

    fn i_reduced(&self) -> f64 {
        let (l, m) = (&self.frame.lambda_coef, &self.frame.mu_coef);
        let h123 = self.h.coefficients[0][1][2];
        -(1.0 + 2.0 * (l[0] * l[2] + m[0] * m[2]) + (l[0] * l[1] + m[0] * m[1])) * h123
            + (l[0] * m[1] - l[1] * m[0]) / (2.0 * SQRT_3)
    }

    /// The `(X,Y,Z,W,V) = (e₂,e₁,e₁,e₁,e₃)` instance written through
    /// `R_2113, R_2123, R_2112` and `𝐈`, which must equal `3√3λ`.
    pub fn reduced_instance_residual(&self, lambda: f64) -> f64 {
        let r = &self.riemann;
        let h = &self.h.coefficients;
        let (l, m) = (&self.frame.lambda_coef, &self.frame.mu_coef);
        let e = &self.e;
        let i = self.i_tensor(&e[1], &e[0], &e[0], &e[0], &e[2]);
        let lhs = 12.0
            * (r[1][0][0][2] * (h[0][0][0] - 2.0 * h[2][2][0]) + r[1][0][1][2] * h[0][0][1]
                - 2.0 * r[1][0][0][1] * h[0][1][2])
            + SQRT_3 / 6.0 * (l[0] * m[1] - l[1] * m[0])
            + 0.5 * h[0][1][2]
            + 2.0 * i;
        (lhs - 3.0 * SQRT_3 * lambda).abs()
    }

    /// `g((∇̃_{e₁}P)e₂,e₃) = (λ₂−λ₃)/(2√3)` and its three companions.
    pub fn nabla_p_frame_residual(&self) -> f64 {
        let nk = self.nk;
        let e = &self.e;
        let (l, m) = (&self.frame.lambda_coef, &self.frame.mu_coef);
        let c = 1.0 / (2.0 * SQRT_3);
        let (dp12, dpj12) = nk.nabla_p(&e[0], &e[1]);
        let (dp23, dpj23) = nk.nabla_p(&e[1], &e[2]);
        [
            self.g(&dp12, &e[2]) - c * (l[1] - l[2]),
            self.g(&dp23, &e[0]) - c * (l[2] - l[0]),
            self.g(&dpj12, &e[2]) - c * (m[1] - m[2]),
            self.g(&dpj23, &e[0]) - c * (m[2] - m[0]),
        ]
        .iter()
        .fold(0.0f64, |a, x| a.max(x.abs()))
    }

    pub fn maximize_cubic_form(&self) -> Result<CubicMax, Error> {
        let raw = cubic::maximize(&self.h.coefficients)?;
        let base = self.frame.frame.image.clone();
        let tv = |c: [f64; 3]| TangentVector::new(base.clone(), self.vector(c));
        Ok(CubicMax {
            direction: tv(raw.basis[0]),
            mu1: raw.value,
            basis: raw.basis.map(tv),
            critical_residual: raw.critical_residual,
            diagonal_residual: raw.diagonal_residual,
        })
    }

    /// Residuals of the three angle-function relations.
    pub fn angle_report(&self) -> AngleReport {
        let th = &self.frame.theta;
        let h = &self.h.coefficients;
        let w = &self.omega.omega;
        let angle_sum = frame::angle_distance(th[0] + th[1] + th[2], 0.0);
        let mut angle_derivative: f64 = 0.0;
        let mut angle_coupling: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                angle_derivative = angle_derivative.max((self.angle_derivatives[i][j] + h[j][j][i]).abs());
                for k in 0..3 {
                    if j == k {
                        continue;
                    }
                    let d = th[j] - th[k];
                    let v = h[i][j][k] * libm::cos(d)
                        - (SQRT_3 / 6.0 * levi_civita_symbol(i, j, k) - w[i][j][k]) * libm::sin(d);
                    angle_coupling = angle_coupling.max(v.abs());
                }
            }
        }
        AngleReport {
            angle_sum,
            angle_derivative,
            angle_coupling,
        }
    }

    /// Random-free extra 4-tuples for the polarized check: the special
    /// directions, taken in rotating order.
    pub fn default_polarized_tuples() -> Vec<[[f64; 3]; 4]> {
        let d = sphere::special_directions();
        (0..d.len())
            .map(|n| [d[n], d[(n + 3) % 13], d[(n + 7) % 13], d[(n + 11) % 13]])
            .collect()
    }

    pub fn nabla_h_max(&self) -> f64 {
        max_abs4(&self.nabla_h.coefficients)
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn max_diff4(a: &T4, b: &T4) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    r = r.max((a[i][j][k][l] - b[i][j][k][l]).abs());
                }
            }
        }
    }
    r
}
