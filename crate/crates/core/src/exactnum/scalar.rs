//! Scalar traits shared by the polynomial and interval layers.
//!
//! Polynomials are generic over a [`Coefficient`] ring; exact algorithms
//! (Sturm sequences, gcds, exact sign decisions) additionally need an
//! [`ExactField`]. The interval layer is generic over [`RoundingFloat`].

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

/// Commutative ring with unit, as needed by polynomial arithmetic.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
}

/// A field: every nonzero element is invertible.
pub trait Field: Coefficient {
    /// `None` for zero.
    fn checked_inv(&self) -> Option<Self>;
}

/// A field with exact, decidable sign and an embedding of the rationals.
pub trait ExactField: Field + Eq {
    fn exact_sign(&self) -> Ordering;
    fn from_rational(q: &BigRational) -> Self;
}

/// Floating-point type usable as an interval endpoint.
pub trait RoundingFloat: Float + Debug + Send + Sync + 'static {
    fn step_down(self) -> Self;
    fn step_up(self) -> Self;
    fn from_f64_down(x: f64) -> Self;
    fn from_f64_up(x: f64) -> Self;
    fn to_f64_exact(self) -> f64;
}

impl RoundingFloat for f64 {
    #[inline]
    fn step_down(self) -> Self {
        self.next_down()
    }
    #[inline]
    fn step_up(self) -> Self {
        self.next_up()
    }
    #[inline]
    fn from_f64_down(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_f64_up(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64_exact(self) -> f64 {
        self
    }
}

impl RoundingFloat for f32 {
    #[inline]
    fn step_down(self) -> Self {
        self.next_down()
    }
    #[inline]
    fn step_up(self) -> Self {
        self.next_up()
    }
    fn from_f64_down(x: f64) -> Self {
        let r = x as f32;
        if (r as f64) > x {
            r.next_down()
        } else {
            r
        }
    }
    fn from_f64_up(x: f64) -> Self {
        let r = x as f32;
        if (r as f64) < x {
            r.next_up()
        } else {
            r
        }
    }
    #[inline]
    fn to_f64_exact(self) -> f64 {
        self as f64
    }
}

macro_rules! float_coefficient {
    ($($t:ty),*) => {$(
        impl Coefficient for $t {
            fn from_i64(n: i64) -> Self {
                n as $t
            }
        }
        impl Field for $t {
            fn checked_inv(&self) -> Option<Self> {
                if *self == 0.0 { None } else { Some(1.0 / *self) }
            }
        }
    )*};
}
float_coefficient!(f32, f64);

impl Coefficient for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for BigRational {
    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl ExactField for BigRational {
    fn exact_sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

/// Closest-ish `f64` of a rational together with a guaranteed enclosure.
pub(crate) fn rational_to_f64_bounds(q: &BigRational) -> (f64, f64) {
    if q.is_zero() {
        return (0.0, 0.0);
    }
    if q.denom().is_one() {
        if let Some(v) = q.numer().to_i64() {
            if v.unsigned_abs() < (1u64 << 53) {
                let f = v as f64;
                return (f, f);
            }
        }
    }
    let approx = q.to_f64().unwrap_or(f64::NAN);
    if !approx.is_finite() {
        return if q.is_positive() {
            (f64::MAX, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::MIN)
        };
    }
    // to_f64 is within one ulp; two steps each way is a safe enclosure.
    (approx.next_down().next_down(), approx.next_up().next_up())
}
