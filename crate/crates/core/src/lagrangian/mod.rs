//! Induced geometry of a Lagrangian immersion `f: D ⊆ ℝ³ → S³×S³`.
//!
//! [`Analyzer::analyze`] computes, at one chart point, the adapted frame
//! `Peᵢ = λᵢeᵢ + μᵢJeᵢ`, the second fundamental form `h_ij^k`, the
//! connection coefficients `ω_ij^k`, `∇h` and the curvature tensors needed by
//! the J-isotropy identities. All components are taken in the adapted frame.
//!
//! Second derivatives of the immersion (hence `h`, the induced Christoffel
//! symbols and both curvatures) come from Taylor jets of the chart and are
//! exact up to rounding. `ω` needs the derivative of the adapted frame and is
//! obtained by Richardson-extrapolated central differences.

mod cubic;
pub mod frame;
mod geometry;
pub mod local;
pub mod sphere;

pub use cubic::CubicMax;
pub use geometry::{
    angle_relations_check, AngleRelations, CurvatureSplitResiduals, IsotropyReport, AngleReport, PointGeometry,
};
pub use local::{T3, T4};

use alloc::vec::Vec;

use crate::dsl::ImmersionDescriptor;
use crate::jet::Jet;
use crate::linalg::{self, Mat3};
use crate::structure::{lie_coords, LiePair, ManifoldPoint, NkStructure, TangentVector};
use crate::Error;
use frame::Adapted;
use local::LocalGeometry;

/// Tolerance of [`Analyzer::adapted_frame`]'s Lagrangian precondition.
pub const LAGRANGIAN_TOLERANCE: f64 = 1e-8;
/// Accepted asymmetry and trace of `h_ij^k`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;
/// Variation of `h` and `ω` over the probe stencil below which the
/// constant-coefficient formula for `∇h` is used.
pub const CONSTANCY_TOLERANCE: f64 = 1e-7;

/// Central-difference step for the frame derivative; halved once for
/// Richardson extrapolation.
const FD_STEP: f64 = 1e-3;
/// Half-width of the stencil probing constancy of `h` and `ω`.
const PROBE_STEP: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct FramePoint {
    pub chart_point: [f64; 3],
    pub image: ManifoldPoint<f64>,
    /// Orthonormal under `g`.
    pub frame: [TangentVector<f64>; 3],
    /// Pushforwards of the chart directions.
    pub jacobian: [TangentVector<f64>; 3],
}

impl FramePoint {
    pub fn frame_lie(&self) -> [LiePair<f64>; 3] {
        core::array::from_fn(|i| self.frame[i].lie.clone())
    }

    /// `max |g(eᵢ,eⱼ) − δᵢⱼ|`.
    pub fn gram_residual(&self, nk: &NkStructure<f64>) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let d = if i == j { 1.0 } else { 0.0 };
                r = r.max((nk.metric(&self.frame[i].lie, &self.frame[j].lie) - d).abs());
            }
        }
        r
    }
}

#[derive(Clone, Debug)]
pub struct AdaptedFrame {
    pub frame: FramePoint,
    /// `θᵢ ∈ [0, π)`, ascending.
    pub theta: [f64; 3],
    pub lambda_coef: [f64; 3],
    pub mu_coef: [f64; 3],
    /// Two angles coincide modulo π; the frame is then not unique.
    pub degenerate: bool,
    /// `max |Peᵢ − λᵢeᵢ − μᵢJeᵢ|`.
    pub p_residual: f64,
    /// `max |√3JG(eᵢ,eⱼ) − Σₖεᵢⱼᵏeₖ|`.
    pub orientation_residual: f64,
}

impl AdaptedFrame {
    fn from_parts(fp: &FramePoint, a: Adapted) -> Self {
        let frame = FramePoint {
            frame: core::array::from_fn(|i| TangentVector::new(fp.image.clone(), a.e[i].clone())),
            ..fp.clone()
        };
        Self {
            frame,
            theta: a.theta,
            lambda_coef: a.lambda,
            mu_coef: a.mu,
            degenerate: a.degenerate,
            p_residual: a.p_residual,
            orientation_residual: a.orientation_residual,
        }
    }

    fn as_adapted(&self) -> Adapted {
        Adapted {
            e: self.frame.frame_lie(),
            theta: self.theta,
            lambda: self.lambda_coef,
            mu: self.mu_coef,
            degenerate: self.degenerate,
            p_residual: self.p_residual,
            orientation_residual: self.orientation_residual,
        }
    }
}

/// `h_ij^k = g(h(eᵢ,eⱼ), Jeₖ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondFundamentalForm {
    pub coefficients: T3,
}

impl SecondFundamentalForm {
    /// Largest deviation from total symmetry.
    pub fn symmetry_residual(&self) -> f64 {
        let h = &self.coefficients;
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    r = r.max((h[i][j][k] - h[j][i][k]).abs());
                    r = r.max((h[i][j][k] - h[i][k][j]).abs());
                }
            }
        }
        r
    }

    /// `max_k |Σᵢ h_ii^k|`.
    pub fn trace_residual(&self) -> f64 {
        let h = &self.coefficients;
        (0..3)
            .map(|k| (h[0][0][k] + h[1][1][k] + h[2][2][k]).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs3(&self.coefficients)
    }
}

/// `ω_ij^k = g(∇_{eᵢ}eⱼ, eₖ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionCoeffs {
    pub omega: T3,
}

impl ConnectionCoeffs {
    /// `max |ω_ij^k + ω_ik^j|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let w = &self.omega;
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    r = r.max((w[i][j][k] + w[i][k][j]).abs());
                }
            }
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NablaHPath {
    /// `h` and `ω` are constant near the point; the algebraic formula in
    /// terms of `h`, `ω` and `ε` is exact.
    ConstantCoefficients,
    /// Covariant derivative of the cubic form from the chart's jets.
    Jet,
}

/// `g((∇h)(eᵢ,eⱼ,eₖ), Jeₗ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NablaH {
    pub coefficients: T4,
    pub path: NablaHPath,
}

pub(crate) fn max_abs3(t: &T3) -> f64 {
    t.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub(crate) fn max_abs4(t: &T4) -> f64 {
    t.iter().flatten().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn diff3(a: &T3, b: &T3) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                r = r.max((a[i][j][k] - b[i][j][k]).abs());
            }
        }
    }
    r
}

/// `ε_ij^k`.
pub fn levi_civita_symbol(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Coefficients `E` with `eᵢ = Σₐ E[i][a] zₐ`.
fn frame_matrix(nk: &NkStructure<f64>, e: &[LiePair<f64>; 3], z: &[LiePair<f64>; 3], ginv: &Mat3) -> Mat3 {
    core::array::from_fn(|i| {
        let low: [f64; 3] = core::array::from_fn(|b| nk.metric(&e[i], &z[b]));
        core::array::from_fn(|a| (0..3).map(|b| low[b] * ginv[b][a]).sum())
    })
}

fn shifted(x: [f64; 3], a: usize, s: f64) -> [f64; 3] {
    let mut y = x;
    y[a] += s;
    y
}

/// Adapted frame data at a point together with the coordinate fields.
struct Sample {
    z: [LiePair<f64>; 3],
    adapted: Adapted,
}

/// The float and jet versions of the ambient structure, built once.
#[derive(Clone, Debug)]
pub struct Analyzer {
    nk: NkStructure<f64>,
    nkj: NkStructure<Jet>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Self::new()
    }
}

impl Analyzer {
    pub fn new() -> Self {
        Self {
            nk: NkStructure::new(),
            nkj: NkStructure::new(),
        }
    }

    pub fn structure(&self) -> &NkStructure<f64> {
        &self.nk
    }

    /// Image point, pushforwards and a Gram–Schmidt frame.
    pub fn frame_at(&self, imm: &ImmersionDescriptor, x: [f64; 3]) -> Result<FramePoint, Error> {
        let (image, jac) = imm.jacobian(x)?;
        let mut jacobian = Vec::with_capacity(3);
        for (dp, dq) in &jac {
            jacobian.push(lie_coords(&image, dp, dq)?);
        }
        let jacobian: [TangentVector<f64>; 3] = jacobian.try_into().map_err(|_| Error::DegenerateChart)?;
        let z: [LiePair<f64>; 3] = core::array::from_fn(|a| jacobian[a].lie.clone());
        check_rank(&self.nk, &z)?;
        let f = frame::gram_schmidt(&self.nk, &z).ok_or(Error::DegenerateChart)?;
        Ok(FramePoint {
            chart_point: x,
            frame: core::array::from_fn(|i| TangentVector::new(image.clone(), f[i].clone())),
            image,
            jacobian,
        })
    }

    /// `max |g(Jeᵢ, eⱼ)|` over the frame.
    pub fn lagrangian_deviation(&self, fp: &FramePoint) -> f64 {
        let mut r: f64 = 0.0;
        for a in &fp.frame {
            let ja = self.nk.j(&a.lie);
            for b in &fp.frame {
                r = r.max(self.nk.metric(&ja, &b.lie).abs());
            }
        }
        r
    }

    pub fn check_lagrangian(&self, fp: &FramePoint, tol: f64) -> bool {
        self.lagrangian_deviation(fp) <= tol
    }

    fn require_lagrangian(&self, fp: &FramePoint) -> Result<(), Error> {
        let deviation = self.lagrangian_deviation(fp);
        if deviation <= LAGRANGIAN_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NotLagrangian { deviation })
        }
    }

    pub fn adapted_frame(&self, fp: &FramePoint) -> Result<AdaptedFrame, Error> {
        self.require_lagrangian(fp)?;
        let a = frame::adapt(&self.nk, &fp.frame_lie())?;
        Ok(AdaptedFrame::from_parts(fp, a))
    }

    /// Adapted frame from the jet chart, without the pushforward plumbing.
    fn sample(&self, imm: &ImmersionDescriptor, x: [f64; 3]) -> Result<Sample, Error> {
        let zj = local::coordinate_fields(imm, x);
        let z: [LiePair<f64>; 3] = core::array::from_fn(|a| LiePair::from_array(zj[a].c.map(|c| c.value())));
        check_rank(&self.nk, &z)?;
        let f = frame::gram_schmidt(&self.nk, &z).ok_or(Error::DegenerateChart)?;
        let mut r: f64 = 0.0;
        for a in &f {
            for b in &f {
                r = r.max(self.nk.metric(&self.nk.j(a), b).abs());
            }
        }
        if r > LAGRANGIAN_TOLERANCE {
            return Err(Error::NotLagrangian { deviation: r });
        }
        Ok(Sample {
            z,
            adapted: frame::adapt(&self.nk, &f)?,
        })
    }

    pub fn second_fundamental_form(
        &self,
        imm: &ImmersionDescriptor,
        x: [f64; 3],
    ) -> Result<SecondFundamentalForm, Error> {
        let fp = self.frame_at(imm, x)?;
        let af = self.adapted_frame(&fp)?;
        let loc = local::compute(&self.nkj, &self.nk, imm, x)?;
        self.sff_in(&loc, &af.frame.frame_lie())
    }

    fn sff_in(&self, loc: &LocalGeometry, e: &[LiePair<f64>; 3]) -> Result<SecondFundamentalForm, Error> {
        let em = frame_matrix(&self.nk, e, &loc.z, &loc.gram_inv);
        let s = SecondFundamentalForm {
            coefficients: local::to_frame3(&loc.cubic, &em),
        };
        let residual = s.symmetry_residual().max(s.trace_residual());
        if residual > SYMMETRY_TOLERANCE {
            return Err(Error::Integrity {
                what: "symmetry and trace of h",
                residual,
            });
        }
        Ok(s)
    }

    pub fn connection_coeffs(
        &self,
        imm: &ImmersionDescriptor,
        x: [f64; 3],
        af: &AdaptedFrame,
    ) -> Result<ConnectionCoeffs, Error> {
        let z: [LiePair<f64>; 3] = core::array::from_fn(|a| af.frame.jacobian[a].lie.clone());
        Ok(self.frame_derivative(imm, x, &af.as_adapted(), &z)?.0)
    }

    /// `ω` and the chart derivatives `∂ₐθⱼ` (as `[a][j]`) of the continued
    /// adapted frame.
    fn frame_derivative(
        &self,
        imm: &ImmersionDescriptor,
        x: [f64; 3],
        center: &Adapted,
        z: &[LiePair<f64>; 3],
    ) -> Result<(ConnectionCoeffs, [[f64; 3]; 3]), Error> {
        let nk = &self.nk;
        let mut step = FD_STEP;
        for _attempt in 0..4 {
            match self.try_frame_derivative(imm, x, center, step) {
                Ok(Some((de, dtheta))) => {
                    let gram: Mat3 = core::array::from_fn(|a| core::array::from_fn(|b| nk.metric(&z[a], &z[b])));
                    let ginv = linalg::inv3(&gram).ok_or(Error::DegenerateChart)?;
                    let em = frame_matrix(nk, &center.e, z, &ginv);
                    // ∇̃_{∂a} e_j = ∂a e_j + A(z_a, e_j)
                    let cov: [[LiePair<f64>; 3]; 3] = core::array::from_fn(|a| {
                        core::array::from_fn(|j| de[a][j].clone() + nk.levi_civita(&z[a], &center.e[j]))
                    });
                    let mut omega = [[[0.0; 3]; 3]; 3];
                    for (i, row) in omega.iter_mut().enumerate() {
                        for (j, col) in row.iter_mut().enumerate() {
                            for (k, w) in col.iter_mut().enumerate() {
                                *w = (0..3).map(|a| em[i][a] * nk.metric(&cov[a][j], &center.e[k])).sum();
                            }
                        }
                    }
                    return Ok((ConnectionCoeffs { omega }, dtheta));
                }
                Ok(None) => step *= 0.25,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Integrity {
            what: "continuation of the adapted frame",
            residual: step,
        })
    }

    #[allow(clippy::type_complexity)]
    fn try_frame_derivative(
        &self,
        imm: &ImmersionDescriptor,
        x: [f64; 3],
        center: &Adapted,
        step: f64,
    ) -> Result<Option<([[LiePair<f64>; 3]; 3], [[f64; 3]; 3])>, Error> {
        let nk = &self.nk;
        let mut de: [[LiePair<f64>; 3]; 3] = core::array::from_fn(|_| core::array::from_fn(|_| LiePair::zero()));
        let mut dtheta = [[0.0; 3]; 3];
        for a in 0..3 {
            let mut est: [([LiePair<f64>; 3], [f64; 3]); 2] =
                core::array::from_fn(|_| (core::array::from_fn(|_| LiePair::zero()), [0.0; 3]));
            for (n, s) in [step, 0.5 * step].into_iter().enumerate() {
                let plus = self.sample(imm, shifted(x, a, s))?;
                let minus = self.sample(imm, shifted(x, a, -s))?;
                let (Some(ep), Some(em)) = (
                    frame::continue_frame(nk, center, &plus.adapted),
                    frame::continue_frame(nk, center, &minus.adapted),
                ) else {
                    return Ok(None);
                };
                for j in 0..3 {
                    est[n].0[j] = (ep[j].clone() - em[j].clone()).scale(&(0.5 / s));
                    let (lp, mp) = frame::lambda_mu(nk, &ep[j]);
                    let (lm, mm) = frame::lambda_mu(nk, &em[j]);
                    let d = frame::wrap_half(frame::angle_of(lp, mp) - frame::angle_of(lm, mm));
                    if d.abs() > 0.5 {
                        return Ok(None);
                    }
                    est[n].1[j] = d * (0.5 / s);
                }
            }
            for j in 0..3 {
                de[a][j] = (est[1].0[j].scale(&4.0) - est[0].0[j].clone()).scale(&(1.0 / 3.0));
                dtheta[a][j] = (4.0 * est[1].1[j] - est[0].1[j]) / 3.0;
            }
        }
        Ok(Some((de, dtheta)))
    }

    pub fn nabla_h(&self, imm: &ImmersionDescriptor, x: [f64; 3], af: &AdaptedFrame) -> Result<NablaH, Error> {
        let loc = local::compute(&self.nkj, &self.nk, imm, x)?;
        let center = af.as_adapted();
        let h = self.sff_in(&loc, &center.e)?;
        let (w, _) = self.frame_derivative(imm, x, &center, &loc.z)?;
        self.nabla_h_from(imm, x, &loc, &center, &h, &w)
    }

    fn nabla_h_from(
        &self,
        imm: &ImmersionDescriptor,
        x: [f64; 3],
        loc: &LocalGeometry,
        center: &Adapted,
        h: &SecondFundamentalForm,
        w: &ConnectionCoeffs,
    ) -> Result<NablaH, Error> {
        if self.coefficients_constant(imm, x, center, h, w)? {
            return Ok(NablaH {
                coefficients: constant_coefficient_nabla_h(&h.coefficients, &w.omega),
                path: NablaHPath::ConstantCoefficients,
            });
        }
        Ok(self.jet_nabla_h(loc, center))
    }

    fn jet_nabla_h(&self, loc: &LocalGeometry, center: &Adapted) -> NablaH {
        let em = frame_matrix(&self.nk, &center.e, &loc.z, &loc.gram_inv);
        NablaH {
            coefficients: local::to_frame4(&loc.nabla_cubic, &em),
            path: NablaHPath::Jet,
        }
    }

    /// `∇h` along the jet path regardless of constancy, for cross-checks.
    pub fn nabla_h_jet(&self, imm: &ImmersionDescriptor, x: [f64; 3], af: &AdaptedFrame) -> Result<NablaH, Error> {
        let loc = local::compute(&self.nkj, &self.nk, imm, x)?;
        Ok(self.jet_nabla_h(&loc, &af.as_adapted()))
    }

    /// Whether `h` and `ω`, in adapted frames continued from `center`, stay
    /// within [`CONSTANCY_TOLERANCE`] over the probe stencil.
    fn coefficients_constant(
        &self,
        imm: &ImmersionDescriptor,
        x: [f64; 3],
        center: &Adapted,
        h: &SecondFundamentalForm,
        w: &ConnectionCoeffs,
    ) -> Result<bool, Error> {
        for a in 0..3 {
            for s in [PROBE_STEP, -PROBE_STEP] {
                let y = shifted(x, a, s);
                let probe = self.sample(imm, y)?;
                let Some(e) = frame::continue_frame(&self.nk, center, &probe.adapted) else {
                    return Ok(false);
                };
                let aligned = Adapted {
                    e,
                    ..probe.adapted.clone()
                };
                let loc = local::compute(&self.nkj, &self.nk, imm, y)?;
                let hp = self.sff_in(&loc, &aligned.e)?;
                if diff3(&hp.coefficients, &h.coefficients) > CONSTANCY_TOLERANCE {
                    return Ok(false);
                }
                let (wp, _) = self.frame_derivative(imm, y, &aligned, &probe.z)?;
                if diff3(&wp.omega, &w.omega) > CONSTANCY_TOLERANCE {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Everything at one chart point.
    pub fn analyze<'a>(&'a self, imm: &ImmersionDescriptor, x: [f64; 3]) -> Result<PointGeometry<'a>, Error> {
        let fp = self.frame_at(imm, x)?;
        let af = self.adapted_frame(&fp)?;
        let loc = local::compute(&self.nkj, &self.nk, imm, x)?;
        let center = af.as_adapted();
        let h = self.sff_in(&loc, &center.e)?;
        let (w, dtheta_chart) = self.frame_derivative(imm, x, &center, &loc.z)?;
        let nabla_h = self.nabla_h_from(imm, x, &loc, &center, &h, &w)?;
        Ok(PointGeometry::new(&self.nk, af, loc, h, w, nabla_h, dtheta_chart))
    }
}

fn check_rank(nk: &NkStructure<f64>, z: &[LiePair<f64>; 3]) -> Result<(), Error> {
    let gram: Mat3 = core::array::from_fn(|a| core::array::from_fn(|b| nk.metric(&z[a], &z[b])));
    let scale = (gram[0][0] + gram[1][1] + gram[2][2]) / 3.0;
    if linalg::det3(&gram) > 1e-10 * scale * scale * scale {
        Ok(())
    } else {
        Err(Error::DegenerateChart)
    }
}

/// `(∇h)_ijkl = Σₘ [h_jk^m((1/√3)ε_mi^l + ω_im^l) − ω_ij^m h_mk^l − ω_ik^m h_mj^l]`
/// for a frame in which `h` and `ω` are constant.
pub fn constant_coefficient_nabla_h(h: &T3, w: &T3) -> T4 {
    let inv_sqrt3 = 1.0 / crate::scalar::SQRT_3;
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[i][j][k][l] = (0..3)
                        .map(|m| {
                            h[j][k][m] * (inv_sqrt3 * levi_civita_symbol(m, i, l) + w[i][m][l])
                                - w[i][j][m] * h[m][k][l]
                                - w[i][k][m] * h[m][j][l]
                        })
                        .sum();
                }
            }
        }
    }
    out
}
