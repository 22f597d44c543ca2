//! Scalar abstraction shared by the exact and floating-point paths.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field element used throughout the geometry, restriction and
/// bottleneck code. Implemented for every type with the listed capabilities,
/// which covers `f32`, `f64` and the `num-rational` ratio types.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Total comparison. Panics on unordered values (NaN), which never arise
    /// from finite inputs.
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("unordered scalar comparison")
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer not representable")
    }

    /// `self > 0`. Unlike `Signed::is_positive`, false for `+0.0`.
    fn strictly_positive(&self) -> bool {
        *self > Self::zero()
    }

    /// `self < 0`. Unlike `Signed::is_negative`, false for `-0.0`.
    fn strictly_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a.cmp_total(b) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a.cmp_total(b) == Ordering::Greater {
            b.clone()
        } else {
            a.clone()
        }
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Exact field elements with equality and hashing, required wherever values
/// are deduplicated or compared without tolerance.
///
/// The ratio conversions let hot loops run on scaled machine integers when
/// every input has a small numerator and denominator.
pub trait ExactScalar: Scalar + Ord + Eq + Hash {
    /// Reduced numerator and positive denominator, when both fit in `i64`.
    fn to_ratio(&self) -> Option<(i64, i64)>;

    /// The value `numer / denom`; `denom` must be nonzero.
    fn from_ratio(numer: i128, denom: i128) -> Self;
}

impl ExactScalar for BigRational {
    fn to_ratio(&self) -> Option<(i64, i64)> {
        Some((self.numer().to_i64()?, self.denom().to_i64()?))
    }

    fn from_ratio(numer: i128, denom: i128) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }
}

impl ExactScalar for Rational64 {
    fn to_ratio(&self) -> Option<(i64, i64)> {
        Some((*self.numer(), *self.denom()))
    }

    fn from_ratio(numer: i128, denom: i128) -> Self {
        let r = Ratio::new(numer, denom);
        let n = i64::try_from(*r.numer()).expect("numerator exceeds i64");
        let d = i64::try_from(*r.denom()).expect("denominator exceeds i64");
        Rational64::new_raw(n, d)
    }
}

/// A value of `T` extended with `+∞`.
///
/// `+∞` compares above every finite value. Differences follow the bottleneck
/// convention `∞ − ∞ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Extended<T> {
    pub fn zero() -> Self {
        Extended::Finite(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    /// `|a − b|` with `∞ − ∞ = 0` and `∞ − a = ∞`.
    pub fn abs_diff(&self, other: &Self) -> Self {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite((a.clone() - b.clone()).abs()),
            (Extended::Infinite, Extended::Infinite) => Extended::zero(),
            _ => Extended::Infinite,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.cmp_total(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self.cmp_total(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Multiplies by a finite factor; `∞` stays `∞`.
    pub fn scale(&self, factor: &T) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(v.clone() * factor.clone()),
            Extended::Infinite => Extended::Infinite,
        }
    }

    pub fn map<U, F: FnOnce(&T) -> U>(&self, f: F) -> Extended<U> {
        match self {
            Extended::Finite(v) => Extended::Finite(f(v)),
            Extended::Infinite => Extended::Infinite,
        }
    }

    pub fn cmp_total(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp_total(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.as_f64(),
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl<T: Scalar> From<T> for Extended<T> {
    fn from(v: T) -> Self {
        Extended::Finite(v)
    }
}

impl<T: Scalar> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
            _ => Some(self.cmp_total(other)),
        }
    }
}

impl<T: ExactScalar> Ord for Extended<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_total(other)
    }
}

impl<T: Display> Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => v.fmt(f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}
