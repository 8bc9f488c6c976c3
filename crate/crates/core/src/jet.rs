//! Truncated Taylor polynomials in three variables.
//!
//! A [`Jet`] holds the coefficients of `f(x₀ + δ)` in the monomials `δᵐ`
//! with `|m| ≤ 3`. Arithmetic is exact up to truncation, so composing chart
//! maps with jets yields their partial derivatives up to order three without
//! step-size error. Taking a partial derivative lowers the valid order by one.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::quaternion::Quaternion;
use crate::scalar::{Field, Ring, Scalar, SQRT_3};

pub const ORDER: usize = 3;
pub const LEN: usize = 20;

/// Exponents of the monomial basis, grouped by total degree.
pub const MONOMIALS: [[u8; 3]; LEN] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

const NONE: u8 = u8::MAX;

const fn index_of(e: [u8; 3]) -> u8 {
    let mut i = 0;
    while i < LEN {
        let m = MONOMIALS[i];
        if m[0] == e[0] && m[1] == e[1] && m[2] == e[2] {
            return i as u8;
        }
        i += 1;
    }
    NONE
}

const fn product_table() -> [[u8; LEN]; LEN] {
    let mut t = [[NONE; LEN]; LEN];
    let mut i = 0;
    while i < LEN {
        let mut j = 0;
        while j < LEN {
            let (a, b) = (MONOMIALS[i], MONOMIALS[j]);
            let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
            if (e[0] + e[1] + e[2]) as usize <= ORDER {
                t[i][j] = index_of(e);
            }
            j += 1;
        }
        i += 1;
    }
    t
}

const PRODUCT: [[u8; LEN]; LEN] = product_table();

/// Index of the monomial with exponents `e`, if within the truncation order.
pub fn monomial_index(e: [u8; 3]) -> Option<usize> {
    match index_of(e) {
        NONE => None,
        i => Some(i as usize),
    }
}

#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    pub c: [f64; LEN],
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet({:?} + …)", self.c[0])
    }
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = v;
        Self { c }
    }

    /// The coordinate function `x₀[a] + δ[a]`.
    pub fn variable(a: usize, at: f64) -> Self {
        let mut j = Self::constant(at);
        j.c[1 + a] = 1.0;
        j
    }

    /// `c₀ + Σ lin[a]·(x₀[a] + δ[a])`.
    pub fn affine(c0: f64, lin: [f64; 3], at: [f64; 3]) -> Self {
        let mut j = Self::constant(c0 + lin[0] * at[0] + lin[1] * at[1] + lin[2] * at[2]);
        j.c[1..4].copy_from_slice(&lin);
        j
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Partial derivative `∂ₐ` as a jet valid to one order less.
    pub fn partial(&self, a: usize) -> Self {
        let mut out = [0.0; LEN];
        for (i, m) in MONOMIALS.iter().enumerate() {
            if m[a] == 0 {
                continue;
            }
            let mut e = *m;
            e[a] -= 1;
            let k = index_of(e) as usize;
            out[k] += self.c[i] * m[a] as f64;
        }
        Self { c: out }
    }

    /// The derivative `∂ᵐf(x₀)`.
    pub fn derivative(&self, e: [u8; 3]) -> f64 {
        let f = |n: u8| (1..=n as u64).product::<u64>() as f64;
        match monomial_index(e) {
            Some(i) => self.c[i] * f(e[0]) * f(e[1]) * f(e[2]),
            None => f64::NAN,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            c: self.c.map(|x| x * s),
        }
    }

    /// `f(self)` given `f(a), f'(a), f''(a), f'''(a)` at `a = self.value()`.
    pub fn compose(&self, d: [f64; 4]) -> Self {
        let mut n = *self;
        n.c[0] = 0.0;
        let n2 = n * n;
        let n3 = n2 * n;
        let mut out = Self::constant(d[0]);
        for i in 1..LEN {
            out.c[i] = d[1] * n.c[i] + d[2] * 0.5 * n2.c[i] + d[3] / 6.0 * n3.c[i];
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Add for Jet {
    type Output = Self;
    fn add(mut self, r: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(r.c) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Self;
    fn sub(mut self, r: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(r.c) {
            *a -= b;
        }
        self
    }
}

impl Neg for Jet {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for Jet {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let mut out = [0.0; LEN];
        for i in 0..LEN {
            let a = self.c[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..LEN {
                let k = PRODUCT[i][j];
                if k != NONE && r.c[j] != 0.0 {
                    out[k as usize] += a * r.c[j];
                }
            }
        }
        Self { c: out }
    }
}

impl Ring for Jet {
    fn zero() -> Self {
        Self::constant(0.0)
    }
    fn one() -> Self {
        Self::constant(1.0)
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(n as f64)
    }
}

impl Field for Jet {
    fn recip(&self) -> Option<Self> {
        let a = self.value();
        if a == 0.0 {
            return None;
        }
        let r = 1.0 / a;
        Some(self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }
}

impl Scalar for Jet {
    const IS_EXACT: bool = false;
    fn from_f64(v: f64) -> Self {
        Self::constant(v)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(num as f64 / den as f64)
    }
    fn sqrt3() -> Self {
        Self::constant(SQRT_3)
    }
    fn to_f64(&self) -> f64 {
        self.value()
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }
    fn backend_name() -> &'static str {
        "jet"
    }
}

/// `[C, C', C'', C''']` and `[S, S', S'', S''']` at `s`, where
/// `C(s) = cos √s` and `S(s) = sin √s / √s` (entire in `s`).
fn cos_sinc_derivatives(s: f64) -> ([f64; 4], [f64; 4]) {
    if s.abs() < 1.0 {
        // power series: C = Σ (−s)ⁿ/(2n)!, S = Σ (−s)ⁿ/(2n+1)!
        let mut c = [0.0; 4];
        let mut sn = [0.0; 4];
        let mut fact_even = 1.0; // (2n)!
        for n in 0..24usize {
            if n > 0 {
                fact_even *= (2 * n - 1) as f64 * (2 * n) as f64;
            }
            let fact_odd = fact_even * (2 * n + 1) as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for k in 0..4usize.min(n + 1) {
                let falling: f64 = (0..k).map(|t| (n - t) as f64).product();
                let pw = libm::pow(s, (n - k) as f64);
                c[k] += sign * falling * pw / fact_even;
                sn[k] += sign * falling * pw / fact_odd;
            }
        }
        return (c, sn);
    }
    let r = libm::sqrt(s);
    let c0 = libm::cos(r);
    let s0 = libm::sin(r) / r;
    let c1 = -s0 / 2.0;
    let s1 = (c0 - s0) / (2.0 * s);
    let c2 = -s1 / 2.0;
    let s2 = (c1 - 3.0 * s1) / (2.0 * s);
    let c3 = -s2 / 2.0;
    let s3 = (c2 - 5.0 * s2) / (2.0 * s);
    ([c0, c1, c2, c3], [s0, s1, s2, s3])
}

/// `exp(v)` for an imaginary quaternion with jet components.
pub fn exp_im_jet(v: [Jet; 3]) -> Quaternion<Jet> {
    let s = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let (cd, sd) = cos_sinc_derivatives(s.value());
    let c = s.compose(cd);
    let sn = s.compose(sd);
    Quaternion::new(c, sn * v[0], sn * v[1], sn * v[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_derivative() {
        // f = x²y at (1, 2, 0): ∂x∂y f = 2x = 2, ∂x² f = 2y = 4
        let x = Jet::variable(0, 1.0);
        let y = Jet::variable(1, 2.0);
        let f = x * x * y;
        assert_eq!(f.value(), 2.0);
        assert_eq!(f.derivative([1, 1, 0]), 2.0);
        assert_eq!(f.derivative([2, 0, 0]), 4.0);
        assert_eq!(f.derivative([2, 1, 0]), 2.0);
        assert_eq!(f.partial(0).derivative([0, 1, 0]), 2.0);
    }

    #[test]
    fn reciprocal_derivatives() {
        // 1/x at x = 2: −1/4, 2/8, −6/16
        let r = Jet::variable(0, 2.0).recip().unwrap();
        assert!((r.derivative([1, 0, 0]) + 0.25).abs() < 1e-15);
        assert!((r.derivative([2, 0, 0]) - 0.25).abs() < 1e-15);
        assert!((r.derivative([3, 0, 0]) + 0.375).abs() < 1e-15);
    }

    #[test]
    fn cos_sinc_branches_agree() {
        let (c_lo, s_lo) = cos_sinc_derivatives(1.0 - 1e-12);
        let (c_hi, s_hi) = cos_sinc_derivatives(1.0 + 1e-12);
        for k in 0..4 {
            assert!((c_lo[k] - c_hi[k]).abs() < 1e-9, "C^{k}");
            assert!((s_lo[k] - s_hi[k]).abs() < 1e-9, "S^{k}");
        }
    }

    #[test]
    fn exp_jet_value_matches_float_exp() {
        let at = [0.3, -0.2, 0.5];
        let v = [
            Jet::variable(0, at[0]),
            Jet::variable(1, at[1]),
            Jet::variable(2, at[2]),
        ];
        let q = exp_im_jet(v);
        let f = crate::quaternion::exp_im(&crate::ImaginaryQuaternion::from_array(at));
        assert!((q.w.value() - f.w).abs() < 1e-15);
        assert!((q.z.value() - f.z).abs() < 1e-15);
        // |exp(v)|² = 1 to all orders
        let n = q.norm_sq();
        assert!((n - Jet::one()).max_abs() < 1e-14);
    }
}
