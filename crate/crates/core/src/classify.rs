//! The cubic that singles out the J-parallel, non-totally-geodesic cases.
//!
//! In the adapted frame of such a submanifold the only independent component
//! `x = h₁₂³` satisfies `32x³ − 6x + 1 = 0`, and the Gauss equation gives the
//! constant sectional curvature `1/4 − x²`.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::dsl::{catalog, catalog_names};
use crate::lagrangian::Analyzer;
use crate::Error;

/// `(a, p, q)` of `a x³ + p x + q`.
pub const H123_CUBIC: (i64, i64, i64) = (32, -6, 1);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicRoot {
    pub value: f64,
    pub multiplicity: u8,
}

/// Real roots of `a x³ + p x + q` (`a ≠ 0`), ascending, with multiplicity.
/// The root pattern is decided by the exact discriminant.
pub fn depressed_cubic_roots(a: i64, p: i64, q: i64) -> Vec<CubicRoot> {
    assert!(a != 0, "leading coefficient must be nonzero");
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    // monic form x³ + P x + Q
    let pm = r(p) / r(a);
    let qm = r(q) / r(a);
    // Δ = −(4P³ + 27Q²)
    let disc = -(r(4) * pm.clone() * pm.clone() * pm.clone() + r(27) * qm.clone() * qm.clone());
    let (pf, qf) = (p as f64 / a as f64, q as f64 / a as f64);
    let simple = |value: f64| CubicRoot { value, multiplicity: 1 };
    let mut roots = if disc.is_zero() {
        if pm.is_zero() {
            alloc::vec![CubicRoot {
                value: 0.0,
                multiplicity: 3,
            }]
        } else {
            alloc::vec![
                simple(3.0 * qf / pf),
                CubicRoot {
                    value: -1.5 * qf / pf,
                    multiplicity: 2,
                },
            ]
        }
    } else if disc.is_positive() {
        // three real roots, trigonometric form
        let m = 2.0 * libm::sqrt(-pf / 3.0);
        let arg = (3.0 * qf / (pf * m)).clamp(-1.0, 1.0);
        let phi = libm::acos(arg) / 3.0;
        (0..3)
            .map(|k| simple(m * libm::cos(phi - 2.0 * core::f64::consts::PI * k as f64 / 3.0)))
            .collect::<Vec<_>>()
    } else {
        let s = libm::sqrt(qf * qf / 4.0 + pf * pf * pf / 27.0);
        alloc::vec![simple(libm::cbrt(-qf / 2.0 + s) + libm::cbrt(-qf / 2.0 - s))]
    };
    roots.sort_by(|x, y| x.value.partial_cmp(&y.value).unwrap_or(core::cmp::Ordering::Equal));
    roots
}

/// `1/4 − x²`, the sectional curvature for `h₁₂³ = x`.
pub fn curvature_for(h123: f64) -> f64 {
    0.25 - h123 * h123
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootRecord {
    pub root: CubicRoot,
    /// `|32x³ − 6x + 1|`.
    pub residual: f64,
    pub curvature: f64,
    /// Catalog immersions whose `h₁₂³` matches the root.
    pub immersions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub roots: Vec<RootRecord>,
}

/// Solves the cubic and matches each root against the catalog, evaluated at
/// the chart origin.
pub fn classify() -> Result<Classification, Error> {
    let (a, p, q) = H123_CUBIC;
    let an = Analyzer::new();
    let mut measured = Vec::new();
    for name in catalog_names() {
        let imm = catalog(name)?;
        let h = an.second_fundamental_form(&imm, [0.0; 3])?;
        if h.max_abs() > 1e-7 {
            measured.push((name, h.coefficients[0][1][2]));
        }
    }
    let roots = depressed_cubic_roots(a, p, q)
        .into_iter()
        .map(|root| {
            let x = root.value;
            RootRecord {
                root,
                residual: (a as f64 * x * x * x + p as f64 * x + q as f64).abs(),
                curvature: curvature_for(x),
                immersions: measured
                    .iter()
                    .filter(|(_, h)| (h - x).abs() < 1e-6)
                    .map(|(n, _)| String::from(*n))
                    .collect(),
            }
        })
        .collect();
    Ok(Classification { roots })
}
