//! A small language for immersions `ℝ³ ⊇ D → S³×S³`.
//!
//! Each component is a product of quaternion constants, exponentials of
//! imaginary quaternions whose components are affine in the chart variables,
//! inverses, and named sub-expressions. Because every exponential argument is
//! affine, derivatives of any order are closed-form; they are computed by
//! evaluating the same tree over [`Jet`]s.
//!
//! ```text
//! immersion f5
//! vars x y z
//! let u = exp(x, y, z)
//! left  = u * const(0, 1, 0, 0) * inv(u)
//! right = inv(u)
//! ```

mod catalog;
mod parse;
mod print;
pub mod symconst;

use alloc::string::String;
use alloc::vec::Vec;

pub use catalog::{catalog, catalog_names, catalog_source};
pub use parse::parse;
pub use print::print;
pub use symconst::SymConst;

use crate::jet::{exp_im_jet, Jet};
use crate::quaternion::{exp_im, ImaginaryQuaternion, Quaternion};
use crate::scalar::Field;
use crate::structure::ManifoldPoint;
use crate::Error;

/// `c₀ + Σ cᵢ·varᵢ` with exact symbolic coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub constant: SymConst,
    pub linear: [SymConst; 3],
}

impl Affine {
    pub fn constant(c: SymConst) -> Self {
        Self {
            constant: c,
            linear: Default::default(),
        }
    }

    pub fn variable(n: usize) -> Self {
        let mut a = Self::constant(SymConst::zero());
        a.linear[n] = SymConst::integer(1);
        a
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(SymConst::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            constant: self.constant.add(&o.constant),
            linear: core::array::from_fn(|i| self.linear[i].add(&o.linear[i])),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            constant: self.constant.neg(),
            linear: core::array::from_fn(|i| self.linear[i].neg()),
        }
    }

    pub fn scale(&self, c: &SymConst) -> Self {
        Self {
            constant: self.constant.mul(c),
            linear: core::array::from_fn(|i| self.linear[i].mul(c)),
        }
    }

    /// Float coefficients `(c₀, [c₁, c₂, c₃])`.
    pub fn to_f64(&self) -> (f64, [f64; 3]) {
        (
            self.constant.to_f64(),
            core::array::from_fn(|i| self.linear[i].to_f64()),
        )
    }
}

/// A resolved quaternion expression. `Binding(n)` refers to the `n`-th `let`.
#[derive(Clone, Debug, PartialEq)]
pub enum QExpr {
    Const([SymConst; 4]),
    Binding(usize),
    Exp([Affine; 3]),
    Mul(alloc::boxed::Box<QExpr>, alloc::boxed::Box<QExpr>),
    Inv(alloc::boxed::Box<QExpr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionDescriptor {
    pub name: String,
    pub variables: [String; 3],
    pub bindings: Vec<(String, QExpr)>,
    pub left: QExpr,
    pub right: QExpr,
}

/// Numbers that chart expressions can be evaluated over.
pub trait ChartScalar: Field + Copy {
    fn affine(c0: f64, lin: [f64; 3], at: [f64; 3]) -> Self;
    fn constant(c: f64) -> Self;
    fn exp3(v: [Self; 3]) -> Quaternion<Self>;
}

impl ChartScalar for f64 {
    fn affine(c0: f64, lin: [f64; 3], at: [f64; 3]) -> Self {
        c0 + lin[0] * at[0] + lin[1] * at[1] + lin[2] * at[2]
    }
    fn constant(c: f64) -> Self {
        c
    }
    fn exp3(v: [Self; 3]) -> Quaternion<Self> {
        exp_im(&ImaginaryQuaternion::from_array(v)).into_inner()
    }
}

impl ChartScalar for Jet {
    fn affine(c0: f64, lin: [f64; 3], at: [f64; 3]) -> Self {
        Jet::affine(c0, lin, at)
    }
    fn constant(c: f64) -> Self {
        Jet::constant(c)
    }
    fn exp3(v: [Self; 3]) -> Quaternion<Self> {
        exp_im_jet(v)
    }
}

impl ImmersionDescriptor {
    /// Both components at `at`, over any chart scalar.
    pub fn eval_generic<T: ChartScalar>(&self, at: [f64; 3]) -> (Quaternion<T>, Quaternion<T>) {
        let mut memo: Vec<Quaternion<T>> = Vec::with_capacity(self.bindings.len());
        for (_, e) in &self.bindings {
            let v = eval_expr(e, at, &memo);
            memo.push(v);
        }
        (
            eval_expr(&self.left, at, &memo),
            eval_expr(&self.right, at, &memo),
        )
    }

    /// The image point. Components are unit up to rounding.
    pub fn evaluate(&self, at: [f64; 3]) -> Result<ManifoldPoint<f64>, Error> {
        let (p, q) = self.eval_generic::<f64>(at);
        ManifoldPoint::from_quaternions(p, q)
    }

    /// Third-order jets of both components around `at`.
    pub fn jets(&self, at: [f64; 3]) -> (Quaternion<Jet>, Quaternion<Jet>) {
        self.eval_generic::<Jet>(at)
    }

    /// Image point and the three ambient pushforwards `(∂ₐp, ∂ₐq)`.
    pub fn jacobian(
        &self,
        at: [f64; 3],
    ) -> Result<(ManifoldPoint<f64>, [(Quaternion<f64>, Quaternion<f64>); 3]), Error> {
        let (p, q) = self.jets(at);
        let value = |j: &Quaternion<Jet>| j.map(|c| c.value());
        let d = |j: &Quaternion<Jet>, a: usize| j.map(|c| c.c[1 + a]);
        let base = ManifoldPoint::from_quaternions(value(&p), value(&q))?;
        Ok((base, core::array::from_fn(|a| (d(&p, a), d(&q, a)))))
    }
}

fn eval_expr<T: ChartScalar>(e: &QExpr, at: [f64; 3], memo: &[Quaternion<T>]) -> Quaternion<T> {
    match e {
        QExpr::Const(c) => Quaternion::from_components(core::array::from_fn(|i| T::constant(c[i].to_f64()))),
        QExpr::Binding(n) => memo[*n].clone(),
        QExpr::Exp(args) => {
            let v = core::array::from_fn(|i| {
                let (c0, lin) = args[i].to_f64();
                T::affine(c0, lin, at)
            });
            T::exp3(v)
        }
        QExpr::Mul(a, b) => eval_expr(a, at, memo) * eval_expr(b, at, memo),
        QExpr::Inv(a) => {
            let q = eval_expr(a, at, memo);
            // parse guarantees unit factors, hence a nonvanishing norm
            let r = q.norm_sq().recip().unwrap_or_else(T::zero);
            q.conj().scale(&r)
        }
    }
}

/// Consistency check for user input: `|p| = |q| = 1` at a probe point.
pub(crate) fn unit_deviation(d: &ImmersionDescriptor, at: [f64; 3]) -> f64 {
    let (p, q) = d.eval_generic::<f64>(at);
    (p.norm_sq() - 1.0).abs().max((q.norm_sq() - 1.0).abs())
}
