//! The homogeneous nearly Kähler structure on S³×S³.
//!
//! A tangent vector `(U, V)` at `(p, q)` is stored through its left-translated
//! ("Lie") coordinates `(α, β) = (p⁻¹U, q⁻¹V) ∈ Im ℍ × Im ℍ`. In these
//! coordinates the metric `g`, the almost complex structure `J` and the
//! almost product structure `P` are constant, and the Levi-Civita connection
//! of `g` on left-invariant fields is a constant bilinear map, obtained here
//! from the Koszul formula
//!
//! ```text
//! 2 g(∇ₓy, z) = g([x,y], z) − g([y,z], x) + g([z,x], y).
//! ```
//!
//! Every tensor of the structure is therefore polynomial in Lie coordinates,
//! and all of them are generic over the scalar backend.

use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use crate::linalg;
use crate::quaternion::{ImaginaryQuaternion, Quaternion, UnitQuaternion};
use crate::scalar::Scalar;
use crate::Error;

/// A point `(p, q)` of S³×S³.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldPoint<S> {
    pub p: UnitQuaternion<S>,
    pub q: UnitQuaternion<S>,
}

impl<S: Scalar> ManifoldPoint<S> {
    pub fn new(p: UnitQuaternion<S>, q: UnitQuaternion<S>) -> Self {
        Self { p, q }
    }

    pub fn identity() -> Self {
        Self::new(UnitQuaternion::identity(), UnitQuaternion::identity())
    }

    pub fn from_quaternions(p: Quaternion<S>, q: Quaternion<S>) -> Result<Self, Error> {
        Ok(Self::new(UnitQuaternion::new(p)?, UnitQuaternion::new(q)?))
    }
}

/// An element `(α, β)` of the Lie algebra `Im ℍ ⊕ Im ℍ`, stored as six
/// components in the basis `(i,0), (j,0), (k,0), (0,i), (0,j), (0,k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiePair<S> {
    pub c: [S; 6],
}

impl<S: Scalar> LiePair<S> {
    pub fn new(alpha: ImaginaryQuaternion<S>, beta: ImaginaryQuaternion<S>) -> Self {
        let [a0, a1, a2] = alpha.to_array();
        let [b0, b1, b2] = beta.to_array();
        Self {
            c: [a0, a1, a2, b0, b1, b2],
        }
    }

    pub fn from_array(c: [S; 6]) -> Self {
        Self { c }
    }

    pub fn zero() -> Self {
        Self {
            c: core::array::from_fn(|_| S::zero()),
        }
    }

    pub fn basis(n: usize) -> Self {
        let mut z = Self::zero();
        z.c[n] = S::one();
        z
    }

    pub fn alpha(&self) -> ImaginaryQuaternion<S> {
        ImaginaryQuaternion::new(self.c[0].clone(), self.c[1].clone(), self.c[2].clone())
    }

    pub fn beta(&self) -> ImaginaryQuaternion<S> {
        ImaginaryQuaternion::new(self.c[3].clone(), self.c[4].clone(), self.c[5].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            c: core::array::from_fn(|i| self.c[i].clone() * s.clone()),
        }
    }

    /// Largest absolute component, as a float.
    pub fn max_abs(&self) -> f64 {
        self.c
            .iter()
            .map(crate::scalar::magnitude)
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Swaps the two factors: this is `P` in Lie coordinates.
    pub fn swap(&self) -> Self {
        Self::new(self.beta(), self.alpha())
    }
}

impl LiePair<f64> {
    pub fn norm_euclid(&self) -> f64 {
        libm::sqrt(self.c.iter().map(|x| x * x).sum())
    }
}

impl<S: Scalar> Add for LiePair<S> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(r.c) {
            *a = a.clone() + b;
        }
        Self { c }
    }
}

impl<S: Scalar> Sub for LiePair<S> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(r.c) {
            *a = a.clone() - b;
        }
        Self { c }
    }
}

impl<S: Scalar> Neg for LiePair<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            c: self.c.map(|x| -x),
        }
    }
}

/// Linear combination helper: `Σ wᵢ vᵢ`.
pub fn combine<S: Scalar>(terms: &[(S, &LiePair<S>)]) -> LiePair<S> {
    terms
        .iter()
        .fold(LiePair::zero(), |acc, (w, v)| acc + v.scale(w))
}

/// A tangent vector with its base point.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector<S> {
    pub base: ManifoldPoint<S>,
    pub lie: LiePair<S>,
}

impl<S: Scalar> TangentVector<S> {
    pub fn new(base: ManifoldPoint<S>, lie: LiePair<S>) -> Self {
        Self { base, lie }
    }

    pub fn alpha(&self) -> ImaginaryQuaternion<S> {
        self.lie.alpha()
    }

    pub fn beta(&self) -> ImaginaryQuaternion<S> {
        self.lie.beta()
    }

    /// The ambient pair `(pα, qβ)`.
    pub fn from_lie(&self) -> (Quaternion<S>, Quaternion<S>) {
        (
            (*self.base.p).clone() * self.alpha().to_quaternion(),
            (*self.base.q).clone() * self.beta().to_quaternion(),
        )
    }

    fn with_lie(&self, lie: LiePair<S>) -> Self {
        Self::new(self.base.clone(), lie)
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        same_base(self, o)?;
        Ok(self.with_lie(self.lie.clone() + o.lie.clone()))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Error> {
        same_base(self, o)?;
        Ok(self.with_lie(self.lie.clone() - o.lie.clone()))
    }

    pub fn scale(&self, s: &S) -> Self {
        self.with_lie(self.lie.scale(s))
    }
}

fn same_base<S: Scalar>(a: &TangentVector<S>, b: &TangentVector<S>) -> Result<(), Error> {
    if a.base == b.base {
        Ok(())
    } else {
        Err(Error::BaseMismatch)
    }
}

/// Tolerance for tangency of a float ambient pair.
pub const TANGENCY_TOLERANCE: f64 = 1e-9;

/// Lie coordinates `(p⁻¹U, q⁻¹V)` of an ambient tangent pair `(U, V)`.
pub fn lie_coords<S: Scalar>(
    base: &ManifoldPoint<S>,
    u: &Quaternion<S>,
    v: &Quaternion<S>,
) -> Result<TangentVector<S>, Error> {
    let a = (*base.p.inverse()).clone() * u.clone();
    let b = (*base.q.inverse()).clone() * v.clone();
    let ra = crate::scalar::magnitude(&a.w);
    let rb = crate::scalar::magnitude(&b.w);
    let bad = if S::IS_EXACT {
        !(a.w.is_zero() && b.w.is_zero())
    } else {
        ra > TANGENCY_TOLERANCE || rb > TANGENCY_TOLERANCE
    };
    if bad {
        return Err(Error::NotTangent {
            deviation: ra.max(rb),
        });
    }
    Ok(TangentVector::new(base.clone(), LiePair::new(a.im(), b.im())))
}

/// The constant bilinear map `A(x, y) = ∇̃ₓy` on left-invariant fields,
/// as a 6×6×6 coefficient array.
#[derive(Clone, Debug)]
pub struct ConnectionTensor<S> {
    /// `coeffs[a][b]` is `A(e_a, e_b)`.
    coeffs: Vec<Vec<LiePair<S>>>,
    /// Nonzero entries `(a, b, c, value)`, used for fast contraction.
    sparse: Vec<(usize, usize, usize, S)>,
}

impl<S: Scalar> ConnectionTensor<S> {
    pub fn coefficient(&self, a: usize, b: usize) -> &LiePair<S> {
        &self.coeffs[a][b]
    }

    pub fn apply(&self, x: &LiePair<S>, y: &LiePair<S>) -> LiePair<S> {
        let mut out: [S; 6] = core::array::from_fn(|_| S::zero());
        for (a, b, c, v) in &self.sparse {
            if x.c[*a].is_zero() || y.c[*b].is_zero() {
                continue;
            }
            out[*c] = out[*c].clone() + v.clone() * x.c[*a].clone() * y.c[*b].clone();
        }
        LiePair::from_array(out)
    }
}

/// The nearly Kähler structure `(g, J, P, ∇̃)` in Lie coordinates.
#[derive(Clone, Debug)]
pub struct NkStructure<S> {
    connection: ConnectionTensor<S>,
    inv_sqrt3: S,
}

impl<S: Scalar> Default for NkStructure<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> NkStructure<S> {
    pub fn new() -> Self {
        let inv_sqrt3 = S::sqrt3() * S::from_ratio(1, 3);
        let mut s = Self {
            connection: ConnectionTensor {
                coeffs: Vec::new(),
                sparse: Vec::new(),
            },
            inv_sqrt3,
        };
        s.connection = s.koszul();
        s
    }

    pub fn connection(&self) -> &ConnectionTensor<S> {
        &self.connection
    }

    /// Solves the Koszul formula on the left-invariant basis.
    fn koszul(&self) -> ConnectionTensor<S> {
        let basis: Vec<LiePair<S>> = (0..6).map(LiePair::basis).collect();
        let gram: Vec<Vec<S>> = (0..6)
            .map(|a| (0..6).map(|b| self.metric(&basis[a], &basis[b])).collect())
            .collect();
        let ginv = linalg::invert(&gram).expect("the metric g is nondegenerate");
        let half = S::from_ratio(1, 2);
        let mut coeffs = Vec::with_capacity(6);
        let mut sparse = Vec::new();
        for a in 0..6 {
            let mut row = Vec::with_capacity(6);
            for b in 0..6 {
                // lowered: L_c = g(∇_a b, e_c)
                let lowered: Vec<S> = (0..6)
                    .map(|c| {
                        let (x, y, z) = (&basis[a], &basis[b], &basis[c]);
                        (self.metric(&self.bracket(x, y), z) - self.metric(&self.bracket(y, z), x)
                            + self.metric(&self.bracket(z, x), y))
                            * half.clone()
                    })
                    .collect();
                let raised: [S; 6] = core::array::from_fn(|d| {
                    (0..6).fold(S::zero(), |acc, c| {
                        acc + lowered[c].clone() * ginv[c][d].clone()
                    })
                });
                for (d, v) in raised.iter().enumerate() {
                    if !v.is_zero() {
                        sparse.push((a, b, d, v.clone()));
                    }
                }
                row.push(LiePair::from_array(raised));
            }
            coeffs.push(row);
        }
        ConnectionTensor { coeffs, sparse }
    }

    /// `g = (4/3)(⟨α,α'⟩+⟨β,β'⟩) − (2/3)(⟨α,β'⟩+⟨α',β⟩)`.
    pub fn metric(&self, x: &LiePair<S>, y: &LiePair<S>) -> S {
        let (a, b) = (x.alpha(), x.beta());
        let (a2, b2) = (y.alpha(), y.beta());
        S::from_ratio(4, 3) * (a.dot(&a2) + b.dot(&b2))
            - S::from_ratio(2, 3) * (a.dot(&b2) + a2.dot(&b))
    }

    /// `J(α, β) = (1/√3)(2β − α, β − 2α)`.
    pub fn j(&self, x: &LiePair<S>) -> LiePair<S> {
        let (a, b) = (x.alpha(), x.beta());
        let two = S::from_i64(2);
        LiePair::new(
            (b.scale(&two) - a.clone()).scale(&self.inv_sqrt3),
            (b - a.scale(&two)).scale(&self.inv_sqrt3),
        )
    }

    /// `P(α, β) = (β, α)`.
    pub fn p(&self, x: &LiePair<S>) -> LiePair<S> {
        x.swap()
    }

    /// The composite `P∘J`.
    pub fn pj(&self, x: &LiePair<S>) -> LiePair<S> {
        self.p(&self.j(x))
    }

    /// The composite `J∘P`.
    pub fn jp(&self, x: &LiePair<S>) -> LiePair<S> {
        self.j(&self.p(x))
    }

    /// Bracket of left-invariant fields: `([α₁,α₂], [β₁,β₂])`.
    pub fn bracket(&self, x: &LiePair<S>, y: &LiePair<S>) -> LiePair<S> {
        LiePair::new(
            x.alpha().commutator(&y.alpha()),
            x.beta().commutator(&y.beta()),
        )
    }

    /// `∇̃ₓy` for the left-invariant extensions of `x` and `y`.
    pub fn levi_civita(&self, x: &LiePair<S>, y: &LiePair<S>) -> LiePair<S> {
        self.connection.apply(x, y)
    }

    /// `G(X,Y) = (∇̃ₓJ)Y = ∇̃ₓ(JY) − J∇̃ₓY`.
    pub fn tensor_g(&self, x: &LiePair<S>, y: &LiePair<S>) -> LiePair<S> {
        self.levi_civita(x, &self.j(y)) - self.j(&self.levi_civita(x, y))
    }

    /// `(∇̃ₓG)(Y,Z) = ∇̃ₓ(G(Y,Z)) − G(∇̃ₓY, Z) − G(Y, ∇̃ₓZ)`.
    pub fn nabla_g(&self, x: &LiePair<S>, y: &LiePair<S>, z: &LiePair<S>) -> LiePair<S> {
        self.levi_civita(x, &self.tensor_g(y, z))
            - self.tensor_g(&self.levi_civita(x, y), z)
            - self.tensor_g(y, &self.levi_civita(x, z))
    }

    /// `((∇̃ₓP)Y, (∇̃ₓPJ)Y)` from the closed forms
    /// `2(∇̃ₓP)Y = JG(X,PY) + JPG(X,Y)` and `2(∇̃ₓPJ)Y = −G(X,PY) + PG(X,Y)`.
    pub fn nabla_p(&self, x: &LiePair<S>, y: &LiePair<S>) -> (LiePair<S>, LiePair<S>) {
        let half = S::from_ratio(1, 2);
        let g_xpy = self.tensor_g(x, &self.p(y));
        let g_xy = self.tensor_g(x, y);
        let dp = (self.j(&g_xpy) + self.jp(&g_xy)).scale(&half);
        let dpj = (self.p(&g_xy) - g_xpy).scale(&half);
        (dp, dpj)
    }

    /// `((∇̃ₓP)Y, (∇̃ₓPJ)Y)` straight from the connection.
    pub fn nabla_p_direct(&self, x: &LiePair<S>, y: &LiePair<S>) -> (LiePair<S>, LiePair<S>) {
        let dp = self.levi_civita(x, &self.p(y)) - self.p(&self.levi_civita(x, y));
        let dpj = self.levi_civita(x, &self.pj(y)) - self.pj(&self.levi_civita(x, y));
        (dp, dpj)
    }

    /// The closed-form curvature tensor `R̃(X,Y)Z`.
    pub fn curvature(&self, x: &LiePair<S>, y: &LiePair<S>, z: &LiePair<S>) -> LiePair<S> {
        let g = |a: &LiePair<S>, b: &LiePair<S>| self.metric(a, b);
        let (jx, jy, jz) = (self.j(x), self.j(y), self.j(z));
        let (px, py) = (self.p(x), self.p(y));
        let (jpx, jpy) = (self.jp(x), self.jp(y));
        let five12 = S::from_ratio(5, 12);
        let one12 = S::from_ratio(1, 12);
        let one3 = S::from_ratio(1, 3);
        let two = S::from_i64(2);
        let t1 = (x.scale(&g(y, z)) - y.scale(&g(x, z))).scale(&five12);
        let t2 = (jx.scale(&g(&jy, z)) - jy.scale(&g(&jx, z)) - jz.scale(&(two * g(&jx, y))))
            .scale(&one12);
        let t3 = (px.scale(&g(&py, z)) - py.scale(&g(&px, z)) + jpx.scale(&g(&jpy, z))
            - jpy.scale(&g(&jpx, z)))
        .scale(&one3);
        t1 + t2 + t3
    }

    /// `R(X,Y)Z = ∇ₓ∇ᵧZ − ∇ᵧ∇ₓZ − ∇_{[X,Y]}Z` on left-invariant fields.
    pub fn curvature_from_connection(
        &self,
        x: &LiePair<S>,
        y: &LiePair<S>,
        z: &LiePair<S>,
    ) -> LiePair<S> {
        let nz_y = self.levi_civita(y, z);
        let nz_x = self.levi_civita(x, z);
        self.levi_civita(x, &nz_y)
            - self.levi_civita(y, &nz_x)
            - self.levi_civita(&self.bracket(x, y), z)
    }

    /// `R̃(X,Y,Z,W) = g(R̃(X,Y)Z, W)`.
    pub fn curvature4(&self, x: &LiePair<S>, y: &LiePair<S>, z: &LiePair<S>, w: &LiePair<S>) -> S {
        self.metric(&self.curvature(x, y, z), w)
    }

    // Checked operations on tangent vectors.

    pub fn metric_g(&self, z: &TangentVector<S>, w: &TangentVector<S>) -> Result<S, Error> {
        same_base(z, w)?;
        Ok(self.metric(&z.lie, &w.lie))
    }

    pub fn apply_j(&self, z: &TangentVector<S>) -> TangentVector<S> {
        z.with_lie(self.j(&z.lie))
    }

    pub fn apply_p(&self, z: &TangentVector<S>) -> TangentVector<S> {
        z.with_lie(self.p(&z.lie))
    }

    pub fn g_at(
        &self,
        x: &TangentVector<S>,
        y: &TangentVector<S>,
    ) -> Result<TangentVector<S>, Error> {
        same_base(x, y)?;
        Ok(x.with_lie(self.tensor_g(&x.lie, &y.lie)))
    }

    pub fn nabla_p_at(
        &self,
        x: &TangentVector<S>,
        y: &TangentVector<S>,
    ) -> Result<(TangentVector<S>, TangentVector<S>), Error> {
        same_base(x, y)?;
        let (a, b) = self.nabla_p(&x.lie, &y.lie);
        Ok((x.with_lie(a), x.with_lie(b)))
    }

    pub fn curvature_at(
        &self,
        x: &TangentVector<S>,
        y: &TangentVector<S>,
        z: &TangentVector<S>,
    ) -> Result<TangentVector<S>, Error> {
        same_base(x, y)?;
        same_base(x, z)?;
        Ok(x.with_lie(self.curvature(&x.lie, &y.lie, &z.lie)))
    }
}

/// Covariant derivative of a vector field along a curve, by central
/// differences of the field's Lie coordinates:
/// `Dz/dt = z'(t₀) + A(ζ(t₀), z(t₀))` where `ζ` is the curve velocity.
pub fn covariant_derivative_along(
    nk: &NkStructure<f64>,
    curve: impl Fn(f64) -> ManifoldPoint<f64>,
    field: impl Fn(f64) -> TangentVector<f64>,
    t0: f64,
    step: f64,
) -> Result<TangentVector<f64>, Error> {
    if !(step.is_finite() && step > 1e-12 * (1.0 + t0.abs())) {
        return Err(Error::StepUnderflow { step });
    }
    let (c_plus, c_minus, c0) = (curve(t0 + step), curve(t0 - step), curve(t0));
    let dp = (c_plus.p.into_inner() - c_minus.p.into_inner()).scale(&(0.5 / step));
    let dq = (c_plus.q.into_inner() - c_minus.q.into_inner()).scale(&(0.5 / step));
    // tangency of the FD velocity holds only to O(step²); drop the real part
    let zeta = LiePair::new(
        ((*c0.p.inverse()) * dp).im(),
        ((*c0.q.inverse()) * dq).im(),
    );
    let (f_plus, f_minus, f0) = (field(t0 + step), field(t0 - step), field(t0));
    let dz = (f_plus.lie - f_minus.lie).scale(&(0.5 / step));
    let out = dz + nk.levi_civita(&zeta, &f0.lie);
    if out.c.iter().any(|x| !x.is_finite()) {
        return Err(Error::StepUnderflow { step });
    }
    Ok(TangentVector::new(c0, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{QSqrt3, SQRT_3};

    fn pair(a: [f64; 3], b: [f64; 3]) -> LiePair<f64> {
        LiePair::new(
            ImaginaryQuaternion::from_array(a),
            ImaginaryQuaternion::from_array(b),
        )
    }

    #[test]
    fn metric_examples() {
        let nk = NkStructure::<f64>::new();
        let i0 = pair([1.0, 0.0, 0.0], [0.0; 3]);
        let ii = pair([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
        assert!((nk.metric(&i0, &i0) - 4.0 / 3.0).abs() < 1e-15);
        assert!((nk.metric(&ii, &ii) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn j_example() {
        let nk = NkStructure::<f64>::new();
        let i0 = pair([1.0, 0.0, 0.0], [0.0; 3]);
        let ji = nk.j(&i0);
        let want = pair([-1.0 / SQRT_3, 0.0, 0.0], [-2.0 / SQRT_3, 0.0, 0.0]);
        assert!((ji - want).max_abs() < 1e-15);
        assert!((nk.metric(&nk.j(&i0), &nk.j(&i0)) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn p_example() {
        let nk = NkStructure::<f64>::new();
        let i0 = pair([1.0, 0.0, 0.0], [0.0; 3]);
        assert_eq!(nk.p(&i0), pair([0.0; 3], [1.0, 0.0, 0.0]));
    }

    #[test]
    fn bracket_examples() {
        let nk = NkStructure::<f64>::new();
        let i0 = pair([1.0, 0.0, 0.0], [0.0; 3]);
        let j0 = pair([0.0, 1.0, 0.0], [0.0; 3]);
        let zj = pair([0.0; 3], [0.0, 1.0, 0.0]);
        assert_eq!(nk.bracket(&i0, &j0), pair([0.0, 0.0, 2.0], [0.0; 3]));
        assert!(nk.bracket(&i0, &zj).is_zero());
    }

    #[test]
    fn lie_coords_examples() {
        let id = ManifoldPoint::<f64>::identity();
        let t = lie_coords(&id, &Quaternion::i(), &Quaternion::j()).unwrap();
        assert_eq!(t.lie, pair([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]));
        let base = ManifoldPoint::from_quaternions(Quaternion::i(), Quaternion::one()).unwrap();
        // i⁻¹k = −ik = j
        let t = lie_coords(&base, &Quaternion::k(), &Quaternion::zero()).unwrap();
        assert_eq!(t.lie, pair([0.0, 1.0, 0.0], [0.0; 3]));
        assert!(matches!(
            lie_coords(&id, &Quaternion::one(), &Quaternion::zero()),
            Err(Error::NotTangent { .. })
        ));
    }

    #[test]
    fn base_mismatch_is_rejected() {
        let nk = NkStructure::<f64>::new();
        let a = TangentVector::new(ManifoldPoint::identity(), LiePair::basis(0));
        let other =
            ManifoldPoint::from_quaternions(Quaternion::i(), Quaternion::one()).unwrap();
        let b = TangentVector::new(other, LiePair::basis(0));
        assert!(matches!(nk.metric_g(&a, &b), Err(Error::BaseMismatch)));
        assert!(nk.g_at(&a, &b).is_err());
    }

    #[test]
    fn exact_connection_is_torsion_free() {
        let nk = NkStructure::<QSqrt3>::new();
        for a in 0..6 {
            for b in 0..6 {
                let (x, y) = (LiePair::basis(a), LiePair::basis(b));
                let t = nk.levi_civita(&x, &y) - nk.levi_civita(&y, &x) - nk.bracket(&x, &y);
                assert!(t.is_zero());
            }
        }
    }
}
