//! Scalar abstraction shared by the solver and every game computation.
//!
//! All of the analysis in this crate is written against [`Scalar`]. The
//! intended instantiation is [`Rational`](crate::Rational), an
//! arbitrary-precision fraction for which every comparison below is exact.
//! `f64` is supported for quick exploratory runs; its sign tests use a small
//! absolute tolerance and none of the exactness guarantees carry over.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// Absolute tolerance used by the `f64` instantiation.
pub const F64_TOLERANCE: f64 = 1e-9;

/// Ordered field element used throughout the crate.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` when the scalar type is an exact field (no rounding).
    const EXACT: bool;

    /// Build `numer / denom`. Panics when `denom == 0`.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    /// Zero test used for pivoting and certificates.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_pos(&self) -> bool {
        !self.is_negligible() && self.is_positive()
    }

    fn is_neg(&self) -> bool {
        !self.is_negligible() && self.is_negative()
    }

    /// Equality under [`Scalar::is_negligible`].
    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_negligible()
    }

    fn to_f64_lossy(&self) -> f64;

    /// Largest multiple of `1/denom` not above `self`. Inexact types may
    /// return `self` unchanged.
    fn floor_to(&self, denom: u64) -> Self;

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn floor_to(&self, denom: u64) -> Self {
        let d = BigRational::from_integer(BigInt::from(denom));
        (self * &d).floor() / d
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        numer as f64 / denom as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= F64_TOLERANCE
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn floor_to(&self, _denom: u64) -> Self {
        *self
    }
}

/// Exact scalars that can key hash maps (used for cycle bookkeeping and
/// memoisation).
pub trait HashableScalar: Scalar + Eq + Hash {}

impl HashableScalar for BigRational {}

/// Sum of a slice.
pub fn sum<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc + v.clone())
}

/// Inner product of two equal-length slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}
