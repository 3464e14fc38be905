//! A real number that is exact (a big rational) whenever the inputs allow it
//! and falls back to `f64` otherwise.
//!
//! Comparisons between two exact values are exact. As soon as one side is
//! approximate the comparison is done in `f64` with a relative tolerance of
//! [`APPROX_REL_TOL`].

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigmath::{rat_from_big, rat_from_f64, rat_to_f64};

pub const APPROX_REL_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub enum Real {
    Exact(BigRational),
    Approx(f64),
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "Exact({r})"),
            Real::Approx(x) => write!(f, "Approx({x:e})"),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl From<u64> for Real {
    fn from(n: u64) -> Self {
        Real::Exact(BigRational::from_integer(n.into()))
    }
}

impl From<&BigUint> for Real {
    fn from(n: &BigUint) -> Self {
        Real::Exact(rat_from_big(n))
    }
}

impl From<BigRational> for Real {
    fn from(r: BigRational) -> Self {
        Real::Exact(r)
    }
}

impl Real {
    pub fn zero() -> Real {
        Real::from(0u64)
    }

    pub fn one() -> Real {
        Real::from(1u64)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => rat_to_f64(r),
            Real::Approx(x) => *x,
        }
    }

    /// Natural logarithm, finite even for exact values beyond the `f64` range.
    pub fn ln(&self) -> f64 {
        match self {
            Real::Exact(r) => {
                let n = r.numer().abs().to_biguint().unwrap_or_default();
                let d = r.denom().abs().to_biguint().unwrap_or_else(BigUint::one);
                crate::bigmath::Scaled::of(&n).ln() - crate::bigmath::Scaled::of(&d).ln()
            }
            Real::Approx(x) => libm::log(*x),
        }
    }

    fn pair(&self, other: &Real) -> Option<(BigRational, BigRational)> {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        match self.pair(other) {
            Some((a, b)) => Real::Exact(a + b),
            None => Real::Approx(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        match self.pair(other) {
            Some((a, b)) => Real::Exact(a - b),
            None => Real::Approx(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match self.pair(other) {
            Some((a, b)) => Real::Exact(a * b),
            None => Real::Approx(self.to_f64() * other.to_f64()),
        }
    }

    /// Division; `None` when dividing by an exact zero.
    pub fn div(&self, other: &Real) -> Option<Real> {
        match self.pair(other) {
            Some((a, b)) => {
                if b.is_zero() {
                    None
                } else {
                    Some(Real::Exact(a / b))
                }
            }
            None => {
                let d = other.to_f64();
                if d == 0.0 {
                    None
                } else {
                    Some(Real::Approx(self.to_f64() / d))
                }
            }
        }
    }

    pub fn powi(&self, e: u32) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(num_traits::pow(r.clone(), e as usize)),
            Real::Approx(x) => Real::Approx(libm::pow(*x, e as f64)),
        }
    }

    /// `floor` as a big integer; `None` for negative or non-finite values.
    pub fn floor_big(&self) -> Option<BigUint> {
        match self {
            Real::Exact(r) => r.floor().to_integer().to_biguint(),
            Real::Approx(x) => {
                if !x.is_finite() || *x < 0.0 {
                    return None;
                }
                rat_from_f64(libm::floor(*x))?.to_integer().to_biguint()
            }
        }
    }

    pub fn compare(&self, other: &Real) -> Ordering {
        match self.pair(other) {
            Some((a, b)) => a.cmp(&b),
            None => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let scale = a.abs().max(b.abs());
                if (a - b).abs() <= APPROX_REL_TOL * scale {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn le(&self, other: &Real) -> bool {
        self.compare(other) != Ordering::Greater
    }

    pub fn lt(&self, other: &Real) -> bool {
        self.compare(other) == Ordering::Less
    }
}

/// A positive real of the form `radicand^(1/index)`, used for quantities such
/// as `R(u) = u^(1/q) / φ^{-1}(u^3)` whose root is irrational but whose
/// `index`-th power is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Radical {
    pub radicand: Real,
    pub index: u32,
}

impl Radical {
    pub fn new(radicand: Real, index: u32) -> Radical {
        assert!(index >= 1);
        Radical { radicand, index }
    }

    pub fn to_f64(&self) -> f64 {
        let x = self.radicand.to_f64();
        if x.is_finite() && x > f64::MIN_POSITIVE {
            match self.index {
                1 => x,
                2 => libm::sqrt(x),
                e => libm::pow(x, 1.0 / e as f64),
            }
        } else {
            libm::exp(self.radicand.ln() / self.index as f64)
        }
    }

    pub fn is_exact(&self) -> bool {
        self.radicand.is_exact()
    }

    /// Compares `self * a` against `b` for nonnegative `a`, `b`.
    pub fn scaled_cmp(&self, a: &Real, b: &Real) -> Ordering {
        let lhs = self.radicand.mul(&a.powi(self.index));
        let rhs = b.powi(self.index);
        lhs.compare(&rhs)
    }

    /// Smallest integer `m` with `m >= self * a`, for `a >= 0`.
    pub fn ceil_times(&self, a: &BigUint) -> BigUint {
        match &self.radicand {
            Real::Exact(r) => {
                let y = r * num_traits::pow(rat_from_big(a), self.index as usize);
                crate::bigmath::ceil_root(&y, self.index)
            }
            Real::Approx(_) => {
                let v = self.to_f64() * crate::bigmath::ratio_f64(a, &BigUint::one());
                Real::Approx(libm::ceil(v)).floor_big().unwrap_or_default()
            }
        }
    }
}
