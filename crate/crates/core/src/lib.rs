//! Geometry of the homogeneous nearly Kähler S³×S³ and its Lagrangian
//! submanifolds.
//!
//! Layers, bottom up:
//!
//! * [`scalar`] and [`quaternion`]: exact (ℚ(√3)) and float quaternion algebra.
//! * [`structure`]: metric, `J`, `P`, the Levi-Civita connection and the tensors
//!   built from it, all in left-translated coordinates.
//! * [`dsl`]: a small language for immersions built from quaternion
//!   exponentials, with Taylor-jet differentiation, and the shipped catalog.
//! * [`lagrangian`]: induced geometry of a Lagrangian immersion at a point.
//! * [`classify`]: the cubic that pins down the non-totally-geodesic cases.
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

use alloc::string::String;

pub mod classify;
pub mod dsl;
pub mod jet;
pub mod lagrangian;
pub mod linalg;
pub mod quaternion;
pub mod scalar;
pub mod structure;

pub use quaternion::{exp_im, ImaginaryQuaternion, Quaternion, UnitQuaternion};
pub use scalar::{Field, QSqrt3, Ring, Scalar};
pub use structure::{LiePair, ManifoldPoint, NkStructure, TangentVector};

/// A located problem in immersion source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    /// 1-based line.
    pub line: usize,
    /// 1-based column, counted in characters.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    UnboundIdentifier,
    NonAffine,
    InvalidConstant,
    Structure,
}

impl core::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("zero quaternion has no inverse")]
    ZeroQuaternion,
    #[error("quaternion is not unit (|q|² − 1 = {deviation:e})")]
    NotUnit { deviation: f64 },
    #[error("ambient pair is not tangent (real part {deviation:e})")]
    NotTangent { deviation: f64 },
    #[error("tangent vectors live at different base points")]
    BaseMismatch,
    #[error("finite-difference step {step:e} is unusable")]
    StepUnderflow { step: f64 },
    #[error("chart is degenerate at this point (pushforward rank < 3)")]
    DegenerateChart,
    #[error("point is not Lagrangian (max |g(Je_i, e_j)| = {deviation:e})")]
    NotLagrangian { deviation: f64 },
    #[error("computation integrity: {what} violated by {residual:e}")]
    Integrity { what: &'static str, residual: f64 },
    #[error("parse error at {0}")]
    Parse(Diagnostic),
    #[error("unknown catalog immersion `{0}`")]
    UnknownImmersion(String),
    #[error("optimizer did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("tangent plane is degenerate")]
    DegeneratePlane,
    #[error("J-isotropy constant is not available: variation {variation:e}")]
    LambdaUnavailable { variation: f64 },
}
