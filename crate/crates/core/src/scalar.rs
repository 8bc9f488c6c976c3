//! Scalar backends.
//!
//! Everything above the quaternion layer is generic over [`Scalar`]. Two
//! backends are provided: `f64`, and [`QSqrt3`], the field ℚ(√3) with
//! arbitrary-precision rational components. The second one is enough to
//! evaluate the structure tensors of S³×S³ exactly, since the only
//! irrationality that ever appears in Lie coordinates is the `1/√3` of `J`.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Commutative ring operations needed by the quaternion layer.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
}

/// A ring in which nonzero elements can be inverted.
pub trait Field: Ring {
    /// Multiplicative inverse, `None` for zero.
    fn recip(&self) -> Option<Self>;
}

/// A real field that contains √3. Geometry code is written against this.
pub trait Scalar: Field {
    const IS_EXACT: bool;
    /// Conversion from a float; exact backends convert the binary value exactly.
    fn from_f64(v: f64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn sqrt3() -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    /// Name used in reports.
    fn backend_name() -> &'static str;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

impl Field for f64 {
    fn recip(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / *self)
        }
    }
}

impl Scalar for f64 {
    const IS_EXACT: bool = false;
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn sqrt3() -> Self {
        SQRT_3
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn backend_name() -> &'static str {
        "float"
    }
}

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// An element `a + b√3` of ℚ(√3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The conjugate `a − b√3`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 3b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(3)) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√3", self.a, self.b)
        }
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for QSqrt3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for QSqrt3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Mul for QSqrt3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let three = BigRational::from_integer(BigInt::from(3));
        Self {
            a: &self.a * &rhs.a + three * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for QSqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Div for QSqrt3 {
    type Output = Self;
    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip().expect("division by zero in QSqrt3")
    }
}

impl Ring for QSqrt3 {
    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl Field for QSqrt3 {
    fn recip(&self) -> Option<Self> {
        // √3 is irrational, so the norm vanishes only at zero.
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(Self {
            a: c.a / &n,
            b: c.b / &n,
        })
    }
}

impl Scalar for QSqrt3 {
    const IS_EXACT: bool = true;
    fn from_f64(v: f64) -> Self {
        Self::rational(BigRational::from_float(v).unwrap_or_else(BigRational::zero))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::ratio(num, den)
    }
    fn sqrt3() -> Self {
        Self {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }
    fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * SQRT_3
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn backend_name() -> &'static str {
        "exact"
    }
}

impl QSqrt3 {
    /// Sign of the real number `a + b√3`, computed exactly.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: compare a² against 3b²
        let n = self.norm();
        if n.is_positive() {
            sa
        } else if n.is_negative() {
            sb
        } else {
            0
        }
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Absolute value of a scalar as an `f64`, used when reporting residuals.
pub fn magnitude<S: Scalar>(s: &S) -> f64 {
    if s.is_zero() {
        0.0
    } else {
        s.to_f64().abs()
    }
}
