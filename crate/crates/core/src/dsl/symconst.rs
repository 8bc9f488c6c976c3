//! Exact symbolic constants `Σ r · √3ᵃ · πᵇ` with rational `r`, `a ∈ {0, 1}`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::SQRT_3;

/// Key `(a, b)` of the monomial `√3ᵃ πᵇ`.
type Key = (u8, i32);

#[derive(Clone, PartialEq, Eq, Default)]
pub struct SymConst {
    terms: BTreeMap<Key, BigRational>,
}

impl SymConst {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(r: BigRational) -> Self {
        Self::monomial(r, 0, 0)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn sqrt3() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn pi() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    fn monomial(r: BigRational, a: u8, b: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert((a, b), r);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), r)| {
                let s = if a == 1 { SQRT_3 } else { 1.0 };
                r.to_f64().unwrap_or(f64::NAN) * s * libm::pow(core::f64::consts::PI, b as f64)
            })
            .sum()
    }

    fn insert(&mut self, key: Key, r: BigRational) {
        let e = self.terms.entry(key).or_insert_with(BigRational::zero);
        *e += r;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, r) in &o.terms {
            out.insert(*k, r.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, r)| (*k, -r.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a1, b1), r1) in &self.terms {
            for (&(a2, b2), r2) in &o.terms {
                let mut r = r1 * r2;
                let a = a1 + a2;
                if a == 2 {
                    r *= BigRational::from_integer(BigInt::from(3));
                }
                out.insert((a % 2, b1 + b2), r);
            }
        }
        out
    }

    /// Reciprocal of a single nonzero monomial.
    pub fn recip_monomial(&self) -> Option<Self> {
        if !self.is_single_term() {
            return None;
        }
        let (&(a, b), r) = self.terms.iter().next()?;
        // 1/(r√3) = √3/(3r)
        let mut inv = r.recip();
        if a == 1 {
            inv /= BigRational::from_integer(BigInt::from(3));
        }
        Some(Self::monomial(inv, a, -b))
    }

    /// True when the expression is a bare `±1`.
    fn unit_sign(&self) -> Option<bool> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&k, r) = self.terms.iter().next()?;
        if k != (0, 0) {
            return None;
        }
        if r.is_one() {
            Some(true)
        } else if (-r.clone()).is_one() {
            Some(false)
        } else {
            None
        }
    }

    /// Formats as a coefficient of a variable: `""`, `"-"`, `"3/4*"`, or a
    /// parenthesized sum followed by `*`.
    pub(crate) fn coefficient_prefix(&self) -> String {
        match self.unit_sign() {
            Some(true) => String::new(),
            Some(false) => String::from("-"),
            None if self.is_single_term() => alloc::format!("{self}*"),
            None => alloc::format!("({self})*"),
        }
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, r: &BigRational, a: u8, b: i32) -> fmt::Result {
    let mut factors: alloc::vec::Vec<&str> = alloc::vec::Vec::new();
    if a == 1 {
        factors.push("sqrt3");
    }
    for _ in 0..b.max(0) {
        factors.push("pi");
    }
    let mag = r.abs();
    let numer = mag.numer();
    let denom = mag.denom();
    let mut s = String::new();
    if !numer.is_one() || factors.is_empty() {
        s.push_str(&alloc::format!("{numer}"));
    }
    for fac in &factors {
        if !s.is_empty() {
            s.push('*');
        }
        s.push_str(fac);
    }
    if !denom.is_one() {
        s.push_str(&alloc::format!("/{denom}"));
    }
    for _ in 0..(-b).max(0) {
        s.push_str("/pi");
    }
    f.write_str(&s)
}

impl fmt::Display for SymConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(a, b), r)) in self.terms.iter().enumerate() {
            match (n, r.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_term(f, r, a, b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
