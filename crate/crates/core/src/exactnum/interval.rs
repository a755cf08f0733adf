//! Closed floating-point intervals with outward rounding.
//!
//! Every arithmetic result is widened by one ulp on each side, so the
//! enclosure property holds regardless of the rounding mode in effect.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::golden::GoldenNumber;
use super::scalar::{rational_to_f64_bounds, RoundingFloat};

#[derive(Clone, Copy, PartialEq)]
pub struct Interval<F> {
    lo: F,
    hi: F,
}

impl<F: RoundingFloat> Interval<F> {
    /// Panics (debug) if `lo > hi`.
    #[inline]
    pub fn new(lo: F, hi: F) -> Self {
        debug_assert!(lo <= hi || lo.is_nan() || hi.is_nan(), "inverted interval");
        Interval { lo, hi }
    }

    #[inline]
    pub fn point(x: F) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn zero() -> Self {
        Self::point(F::zero())
    }

    pub fn one() -> Self {
        Self::point(F::one())
    }

    /// Enclosure of an exact golden-field value.
    pub fn from_golden(x: &GoldenNumber) -> Self {
        let (lo, hi) = x.to_f64_bounds();
        Interval {
            lo: F::from_f64_down(lo),
            hi: F::from_f64_up(hi),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let (lo, hi) = rational_to_f64_bounds(q);
        Interval {
            lo: F::from_f64_down(lo),
            hi: F::from_f64_up(hi),
        }
    }

    #[inline]
    pub fn lo(&self) -> F {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> F {
        self.hi
    }

    #[inline]
    pub fn mid(&self) -> F {
        let two = F::one() + F::one();
        let m = self.lo / two + self.hi / two;
        if m < self.lo {
            self.lo
        } else if m > self.hi {
            self.hi
        } else {
            m
        }
    }

    #[inline]
    pub fn width(&self) -> F {
        (self.hi - self.lo).step_up()
    }

    #[inline]
    pub fn rad(&self) -> F {
        let two = F::one() + F::one();
        (self.width() / two).step_up()
    }

    /// Largest absolute value.
    #[inline]
    pub fn mag(&self) -> F {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    #[inline]
    pub fn mig(&self) -> F {
        if self.contains_zero() {
            F::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn contains(&self, x: F) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(&self) -> bool {
        self.lo <= F::zero() && F::zero() <= self.hi
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// -1, +1, or `None` when the interval straddles zero.
    pub fn strict_sign(&self) -> Option<i8> {
        if self.lo > F::zero() {
            Some(1)
        } else if self.hi < F::zero() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self ⊂ int(other)`.
    pub fn is_interior_subset(&self, other: &Self) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Widen symmetrically by `r ≥ 0`.
    pub fn inflate(&self, r: F) -> Self {
        Interval {
            lo: (self.lo - r).step_down(),
            hi: (self.hi + r).step_up(),
        }
    }

    /// Split at the midpoint.
    pub fn bisect(&self) -> (Self, Self) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn sqr(&self) -> Self {
        if self.lo >= F::zero() {
            Interval {
                lo: (self.lo * self.lo).step_down().max(F::zero()),
                hi: (self.hi * self.hi).step_up(),
            }
        } else if self.hi <= F::zero() {
            Interval {
                lo: (self.hi * self.hi).step_down().max(F::zero()),
                hi: (self.lo * self.lo).step_up(),
            }
        } else {
            let m = self.mag();
            Interval {
                lo: F::zero(),
                hi: (m * m).step_up(),
            }
        }
    }

    /// Integer power with the exact range for even exponents.
    pub fn powi(&self, n: u32) -> Self {
        match n {
            0 => Self::one(),
            1 => *self,
            2 => self.sqr(),
            _ => {
                if n % 2 == 0 {
                    let lo = self.mig();
                    let hi = self.mag();
                    Interval {
                        lo: pow_down(lo, n),
                        hi: pow_up(hi, n),
                    }
                } else {
                    let lo = if self.lo >= F::zero() {
                        pow_down(self.lo, n)
                    } else {
                        -pow_up(-self.lo, n)
                    };
                    let hi = if self.hi >= F::zero() {
                        pow_up(self.hi, n)
                    } else {
                        -pow_down(-self.hi, n)
                    };
                    Interval { lo, hi }
                }
            }
        }
    }

    /// `None` when the divisor contains zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.contains_zero() {
            return None;
        }
        let c = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        Some(min_max_outward(c))
    }

    /// Square root of the nonnegative part; `None` if entirely negative.
    pub fn sqrt(&self) -> Option<Self> {
        if self.hi < F::zero() {
            return None;
        }
        let lo = self.lo.max(F::zero());
        Some(Interval {
            lo: lo.sqrt().step_down().max(F::zero()),
            hi: self.hi.sqrt().step_up(),
        })
    }

    /// Interval times a scalar point value.
    #[inline]
    pub fn scale(&self, s: F) -> Self {
        let a = self.lo * s;
        let b = self.hi * s;
        if a <= b {
            Interval {
                lo: a.step_down(),
                hi: b.step_up(),
            }
        } else {
            Interval {
                lo: b.step_down(),
                hi: a.step_up(),
            }
        }
    }
}

fn pow_down<F: RoundingFloat>(x: F, n: u32) -> F {
    // x ≥ 0
    let mut acc = F::one();
    for _ in 0..n {
        acc = (acc * x).step_down().max(F::zero());
    }
    acc
}

fn pow_up<F: RoundingFloat>(x: F, n: u32) -> F {
    let mut acc = F::one();
    for _ in 0..n {
        acc = (acc * x).step_up();
    }
    acc
}

#[inline]
fn min_max_outward<F: RoundingFloat>(c: [F; 4]) -> Interval<F> {
    let mut lo = c[0];
    let mut hi = c[0];
    for &v in &c[1..] {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Interval {
        lo: lo.step_down(),
        hi: hi.step_up(),
    }
}

impl<F: RoundingFloat> Add for Interval<F> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Interval {
            lo: (self.lo + rhs.lo).step_down(),
            hi: (self.hi + rhs.hi).step_up(),
        }
    }
}

impl<F: RoundingFloat> Sub for Interval<F> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Interval {
            lo: (self.lo - rhs.hi).step_down(),
            hi: (self.hi - rhs.lo).step_up(),
        }
    }
}

impl<F: RoundingFloat> Neg for Interval<F> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl<F: RoundingFloat> Mul for Interval<F> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        if self.lo >= F::zero() && rhs.lo >= F::zero() {
            return Interval {
                lo: (self.lo * rhs.lo).step_down(),
                hi: (self.hi * rhs.hi).step_up(),
            };
        }
        min_max_outward([
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ])
    }
}

impl<F: RoundingFloat> fmt::Debug for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}
