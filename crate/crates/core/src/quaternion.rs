//! Quaternion algebra over an arbitrary scalar ring.
//!
//! Components are stored in the basis `1, i, j, k`. Unit quaternions model
//! points of S³ and imaginary quaternions model its Lie algebra.

use core::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Field, Ring, Scalar};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Ring> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn conj(&self) -> Self {
        Self::new(
            self.w.clone(),
            -self.x.clone(),
            -self.y.clone(),
            -self.z.clone(),
        )
    }

    /// Squared norm `w² + x² + y² + z²`.
    pub fn norm_sq(&self) -> T {
        self.w.clone() * self.w.clone()
            + self.x.clone() * self.x.clone()
            + self.y.clone() * self.y.clone()
            + self.z.clone() * self.z.clone()
    }

    /// Euclidean inner product on ℍ ≅ ℝ⁴.
    pub fn dot(&self, o: &Self) -> T {
        self.w.clone() * o.w.clone()
            + self.x.clone() * o.x.clone()
            + self.y.clone() * o.y.clone()
            + self.z.clone() * o.z.clone()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.w.clone() * s.clone(),
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
        )
    }

    /// The imaginary part, dropping `w`.
    pub fn im(&self) -> ImaginaryQuaternion<T> {
        ImaginaryQuaternion::new(self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn components(&self) -> [T; 4] {
        [
            self.w.clone(),
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
        ]
    }

    pub fn from_components(c: [T; 4]) -> Self {
        let [w, x, y, z] = c;
        Self::new(w, x, y, z)
    }

    /// Componentwise map into another ring.
    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Quaternion<U> {
        Quaternion::new(f(&self.w), f(&self.x), f(&self.y), f(&self.z))
    }
}

impl<T: Field> Quaternion<T> {
    /// `q⁻¹ = q̄ / |q|²`.
    pub fn inverse(&self) -> Result<Self, Error> {
        let n = self.norm_sq().recip().ok_or(Error::ZeroQuaternion)?;
        Ok(self.conj().scale(&n))
    }
}

impl Quaternion<f64> {
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self.w - o.w)
            .abs()
            .max((self.x - o.x).abs())
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }
}

impl<T: Ring> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl<T: Ring> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl<T: Ring> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl<T: Ring> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (r.w, r.x, r.y, r.z);
        Self::new(
            a1.clone() * a2.clone()
                - b1.clone() * b2.clone()
                - c1.clone() * c2.clone()
                - d1.clone() * d2.clone(),
            a1.clone() * b2.clone() + b1.clone() * a2.clone() + c1.clone() * d2.clone()
                - d1.clone() * c2.clone(),
            a1.clone() * c2.clone() - b1.clone() * d2.clone()
                + c1.clone() * a2.clone()
                + d1.clone() * b2.clone(),
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl<'a, T: Ring> Mul for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, r: Self) -> Quaternion<T> {
        self.clone() * r.clone()
    }
}

/// A purely imaginary quaternion `x i + y j + z k`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ImaginaryQuaternion<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Ring> ImaginaryQuaternion<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// The `n`-th basis element (`0 → i`, `1 → j`, `2 → k`).
    pub fn basis(n: usize) -> Self {
        let mut c = [T::zero(), T::zero(), T::zero()];
        c[n] = T::one();
        Self::from_array(c)
    }

    pub fn from_array(c: [T; 3]) -> Self {
        let [x, y, z] = c;
        Self::new(x, y, z)
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn to_quaternion(&self) -> Quaternion<T> {
        Quaternion::new(T::zero(), self.x.clone(), self.y.clone(), self.z.clone())
    }

    /// `⟨α, β⟩ = xₐx_b + yₐy_b + zₐz_b`.
    pub fn dot(&self, o: &Self) -> T {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone() + self.z.clone() * o.z.clone()
    }

    /// Cross product; the commutator is twice this.
    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.y.clone() * o.z.clone() - self.z.clone() * o.y.clone(),
            self.z.clone() * o.x.clone() - self.x.clone() * o.z.clone(),
            self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone(),
        )
    }

    /// Commutator `αβ − βα`.
    pub fn commutator(&self, o: &Self) -> Self {
        let c = self.cross(o);
        c.clone() + c
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
        )
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> ImaginaryQuaternion<U> {
        ImaginaryQuaternion::new(f(&self.x), f(&self.y), f(&self.z))
    }
}

impl ImaginaryQuaternion<f64> {
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }
}

impl<T: Ring> Add for ImaginaryQuaternion<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl<T: Ring> Sub for ImaginaryQuaternion<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl<T: Ring> Neg for ImaginaryQuaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Tolerance on `|q|` when constructing a float unit quaternion.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// A quaternion of norm one. Float values are renormalized on construction;
/// exact values must have norm exactly one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion<T>(Quaternion<T>);

impl<T: Scalar> UnitQuaternion<T> {
    pub fn identity() -> Self {
        Self(Quaternion::one())
    }

    /// Accepts `q` when `|q| = 1` (within [`UNIT_TOLERANCE`] for floats,
    /// exactly for the exact backend).
    pub fn new(q: Quaternion<T>) -> Result<Self, Error> {
        let n2 = q.norm_sq();
        let dev = (n2.clone() - T::one()).to_f64().abs();
        if T::IS_EXACT {
            if !(n2 - T::one()).is_zero() {
                return Err(Error::NotUnit { deviation: dev });
            }
            return Ok(Self(q));
        }
        if !(dev <= 2.0 * UNIT_TOLERANCE) {
            return Err(Error::NotUnit { deviation: dev });
        }
        // renormalize the float backend
        let n = libm::sqrt(n2.to_f64());
        let s = T::from_f64(1.0 / n);
        Ok(Self(q.scale(&s)))
    }

    pub fn into_inner(self) -> Quaternion<T> {
        self.0
    }

    /// For unit quaternions the inverse is the conjugate.
    pub fn inverse(&self) -> Self {
        Self(self.0.conj())
    }
}

impl<T> core::ops::Deref for UnitQuaternion<T> {
    type Target = Quaternion<T>;
    fn deref(&self) -> &Quaternion<T> {
        &self.0
    }
}

impl<T: Ring> Mul for UnitQuaternion<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self(self.0 * r.0)
    }
}

impl UnitQuaternion<f64> {
    /// Renormalize without checking the tolerance.
    pub fn normalize(q: Quaternion<f64>) -> Option<Self> {
        let n = q.norm();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(Self(q.scale(&(1.0 / n))))
    }
}

/// `exp(v) = cos|v| + sin|v| · v/|v|` for imaginary `v`, with `exp(0) = 1`.
pub fn exp_im(v: &ImaginaryQuaternion<f64>) -> UnitQuaternion<f64> {
    let r = v.norm();
    let (s, c) = (libm::sin(r), libm::cos(r));
    // sin(r)/r via the series near zero
    let sinc = if r < 1e-4 {
        1.0 - r * r / 6.0 + r * r * r * r / 120.0
    } else {
        s / r
    };
    UnitQuaternion::normalize(Quaternion::new(c, v.x * sinc, v.y * sinc, v.z * sinc))
        .expect("exp of a finite imaginary quaternion is finite")
}
