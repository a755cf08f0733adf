use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::{rational_to_f64_bounds, Coefficient, ExactField, Field};
use super::ExactError;

/// An element `a + b·√5` of the real quadratic field Q(√5).
///
/// Both components are reduced rationals with positive denominators, so
/// structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GoldenNumber {
    a: BigRational,
    b: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The golden ratio (1+√5)/2.
pub fn tau() -> GoldenNumber {
    GoldenNumber::new(rat(1, 2), rat(1, 2))
}

/// √5.
pub fn sqrt5() -> GoldenNumber {
    GoldenNumber::new(BigRational::zero(), BigRational::one())
}

impl GoldenNumber {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        GoldenNumber { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        GoldenNumber {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    /// `n/d`; panics if `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of √5.
    pub fn sqrt5_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b√5`.
    pub fn conjugate(&self) -> Self {
        GoldenNumber {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 5b²` (product with the conjugate).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - rat(5, 1) * &self.b * &self.b
    }

    /// Exact sign as -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.sign() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Exact sign of `a + b√5`, by comparing `a²` with `5b²` where the
    /// components disagree in sign.
    pub fn sign(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // a > 0 > b: sign of a² − 5b²
            (Ordering::Greater, Ordering::Less) => sign_of(&self.norm()),
            // a < 0 < b: sign of 5b² − a²
            (Ordering::Less, Ordering::Greater) => sign_of(&self.norm()).reverse(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        if n.is_zero() {
            // The norm of a nonzero element never vanishes (√5 is irrational).
            return Err(ExactError::DivisionByZero);
        }
        Ok(GoldenNumber {
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GoldenNumber::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> Self {
        GoldenNumber {
            a: &self.a * q,
            b: &self.b * q,
        }
    }

    /// Exact floor as an integer.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // start from a rational bracket of b·√5 and correct by exact signs
        // bracket width |b|·2^-bits stays below 1/2, so the loop runs O(1) times
        let mag = self.b.numer().bits() as i64 - self.b.denom().bits() as i64;
        let (lo, _) = self.rational_bounds((mag.max(0) + 8) as u32);
        let mut m = lo.floor().to_integer();
        loop {
            let diff = self - &GoldenNumber::from_rational(BigRational::from_integer(m.clone()));
            match diff.sign() {
                Ordering::Less => m -= 1,
                _ => {
                    let next = &diff - &GoldenNumber::one();
                    if next.sign() == Ordering::Less {
                        return m;
                    }
                    m += 1;
                }
            }
        }
    }

    /// Rational bracket `lo ≤ self ≤ hi` with `hi − lo ≤ |b|·2^(−bits)`.
    pub fn rational_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let (s_lo, s_hi) = sqrt5_bracket(bits);
        let p = &self.b * &s_lo;
        let q = &self.b * &s_hi;
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        (&self.a + lo, &self.a + hi)
    }

    /// Nearest-ish double.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let v = a + b * 5f64.sqrt();
        // heavy cancellation: fall back to a tight rational bracket
        if v.abs() < 1e-6 * (a.abs() + b.abs()) {
            let (lo, _) = self.rational_bounds(80);
            return lo.to_f64().unwrap_or(v);
        }
        v
    }

    /// Guaranteed `f64` enclosure of the exact value.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        if self.b.is_zero() {
            return rational_to_f64_bounds(&self.a);
        }
        let (lo, hi) = self.rational_bounds(70);
        (rational_to_f64_bounds(&lo).0, rational_to_f64_bounds(&hi).1)
    }

    /// Exact square root inside Q(√5), if one exists. Returns the
    /// nonnegative root.
    pub fn sqrt(&self) -> Option<Self> {
        match self.sign() {
            Ordering::Less => return None,
            Ordering::Equal => return Some(Self::zero()),
            Ordering::Greater => {}
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::from_rational(r));
            }
            // a = 5 s² gives s√5
            if let Some(r) = rational_sqrt(&(&self.a / rat(5, 1))) {
                return Some(GoldenNumber::new(BigRational::zero(), r));
            }
            return None;
        }
        // (p + q√5)² = p² + 5q² + 2pq√5; p² solves P² − aP + 5b²/4 = 0
        let disc = &self.a * &self.a - rat(5, 1) * &self.b * &self.b;
        let d = rational_sqrt(&disc)?;
        for p2 in [(&self.a + &d) / rat(2, 1), (&self.a - &d) / rat(2, 1)] {
            if p2.is_negative() || p2.is_zero() {
                continue;
            }
            if let Some(p) = rational_sqrt(&p2) {
                let q = &self.b / (rat(2, 1) * &p);
                let cand = GoldenNumber::new(p, q);
                if &(&cand * &cand) == self {
                    return Some(cand.abs());
                }
            }
        }
        None
    }
}

fn sign_of(q: &BigRational) -> Ordering {
    if q.is_positive() {
        Ordering::Greater
    } else if q.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// `n/2^k ≤ √5 ≤ (n+1)/2^k`.
pub(crate) fn sqrt5_bracket(bits: u32) -> (BigRational, BigRational) {
    let scaled = BigInt::from(5) << (2 * bits as usize);
    let n = scaled.sqrt();
    let den = BigInt::one() << bits as usize;
    let lo = BigRational::new(n.clone(), den.clone());
    let hi = if &n * &n == scaled {
        lo.clone()
    } else {
        BigRational::new(n + 1, den)
    };
    (lo, hi)
}

impl PartialOrd for GoldenNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl Zero for GoldenNumber {
    fn zero() -> Self {
        GoldenNumber {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for GoldenNumber {
    fn one() -> Self {
        GoldenNumber {
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }
}

impl From<i64> for GoldenNumber {
    fn from(n: i64) -> Self {
        GoldenNumber::from_int(n)
    }
}

impl From<BigRational> for GoldenNumber {
    fn from(q: BigRational) -> Self {
        GoldenNumber::from_rational(q)
    }
}

impl<'a> Add<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn mul(self, rhs: &GoldenNumber) -> GoldenNumber {
        if self.b.is_zero() && rhs.b.is_zero() {
            return GoldenNumber::from_rational(&self.a * &rhs.a);
        }
        let five = rat(5, 1);
        GoldenNumber {
            a: &self.a * &rhs.a + five * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber {
            a: -self.a,
            b: -self.b,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: GoldenNumber) -> GoldenNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GoldenNumber> for GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: &GoldenNumber) -> GoldenNumber {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&GoldenNumber> for GoldenNumber {
    fn add_assign(&mut self, rhs: &GoldenNumber) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&GoldenNumber> for GoldenNumber {
    fn sub_assign(&mut self, rhs: &GoldenNumber) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&GoldenNumber> for GoldenNumber {
    fn mul_assign(&mut self, rhs: &GoldenNumber) {
        *self = &*self * rhs;
    }
}

/// Panics on a zero divisor; use [`GoldenNumber::checked_div`] in pipelines.
impl Div for GoldenNumber {
    type Output = GoldenNumber;
    fn div(self, rhs: GoldenNumber) -> GoldenNumber {
        self.checked_div(&rhs).expect("division by zero in Q(sqrt5)")
    }
}

impl Coefficient for GoldenNumber {
    fn from_i64(n: i64) -> Self {
        GoldenNumber::from_int(n)
    }
}

impl Field for GoldenNumber {
    fn checked_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl ExactField for GoldenNumber {
    fn exact_sign(&self) -> Ordering {
        self.sign()
    }
    fn from_rational(q: &BigRational) -> Self {
        GoldenNumber::from_rational(q.clone())
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders in the constant grammar accepted by the parser, e.g.
/// `1/2 + 1/2*sqrt5`.
/// Serialized in the text grammar, e.g. `"1/2 + 1/4*sqrt5"`.
impl serde::Serialize for GoldenNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let b_abs = self.b.abs();
        let b_str = if b_abs.is_one() {
            "sqrt5".to_string()
        } else {
            format!("{}*sqrt5", fmt_rat(&b_abs))
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{b_str}")
            } else {
                write!(f, "{b_str}")
            }
        } else {
            let op = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{} {op} {b_str}", fmt_rat(&self.a))
        }
    }
}

impl fmt::Debug for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Golden({self})")
    }
}

/// Integer as `BigRational`, handy in tests and constructors.
pub fn rational(n: i64, d: i64) -> BigRational {
    rat(n, d)
}
