use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::golden::GoldenNumber;

/// `mantissa · 2^(−scale)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    scale: u32,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        Dyadic { mantissa, scale }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.scale as usize)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u32) {
        let s = self.scale.max(other.scale);
        (
            &self.mantissa << (s - self.scale) as usize,
            &other.mantissa << (s - other.scale) as usize,
            s,
        )
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, s) = self.aligned(other);
        Dyadic::new(a + b, s)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &other.mantissa, self.scale + other.scale)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.mantissa, self.scale)
    }
}

/// Closed interval with dyadic endpoints. Arithmetic on dyadics is exact,
/// so sums and products below are true enclosures.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyadicInterval {
    /// `None` if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic) -> Option<Self> {
        (lo <= hi).then_some(DyadicInterval { lo, hi })
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        self.hi.to_rational() - self.lo.to_rational()
    }

    pub fn midpoint(&self) -> BigRational {
        (self.hi.to_rational() + self.lo.to_rational()) / BigInt::from(2)
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    /// Exact membership test for a golden-field value.
    pub fn contains(&self, x: &GoldenNumber) -> bool {
        let lo = GoldenNumber::from_rational(self.lo.to_rational());
        let hi = GoldenNumber::from_rational(self.hi.to_rational());
        &lo <= x && x <= &hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.mantissa.is_positive_strict() && !self.hi.mantissa.is_negative_strict()
    }

    pub fn is_subset(&self, other: &DyadicInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
        }
    }

    pub fn mul(&self, other: &DyadicInterval) -> DyadicInterval {
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = c.iter().min().cloned().unwrap();
        let hi = c.iter().max().cloned().unwrap();
        DyadicInterval { lo, hi }
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let lo = self.lo.to_f64();
        let hi = self.hi.to_f64();
        (lo.next_down(), hi.next_up())
    }
}

trait StrictSign {
    fn is_positive_strict(&self) -> bool;
    fn is_negative_strict(&self) -> bool;
}

impl StrictSign for BigInt {
    fn is_positive_strict(&self) -> bool {
        self > &BigInt::zero()
    }
    fn is_negative_strict(&self) -> bool {
        self < &BigInt::zero()
    }
}

/// Dyadic enclosure `[⌊x·2^p⌋, ⌈x·2^p⌉]·2^(−p)` of `x`, of width at most
/// `2^(−p)`. Floors are exact, so enclosures are nested as `p` grows.
///
/// Panics if `precision_bits == 0`.
pub fn enclose(x: &GoldenNumber, precision_bits: u32) -> DyadicInterval {
    assert!(precision_bits >= 1, "precision must be at least one bit");
    let scale = BigRational::from_integer(BigInt::one() << precision_bits as usize);
    let scaled = x.scale(&scale);
    let fl = scaled.floor();
    let exact = GoldenNumber::from_rational(BigRational::from_integer(fl.clone())) == scaled;
    let hi = if exact { fl.clone() } else { &fl + 1 };
    DyadicInterval {
        lo: Dyadic::new(fl, precision_bits),
        hi: Dyadic::new(hi, precision_bits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::golden::{rational, tau};

    /// Bisection on t² − t − 1 over the rationals, independent of `enclose`.
    fn tau_by_bisection(bits: u32) -> (BigRational, BigRational) {
        let mut lo = rational(1, 1);
        let mut hi = rational(2, 1);
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        while &hi - &lo > target {
            let m = (&lo + &hi) / BigInt::from(2);
            let v = &m * &m - &m - rational(1, 1);
            if v < BigRational::zero() {
                lo = m;
            } else {
                hi = m;
            }
        }
        (lo, hi)
    }

    #[test]
    fn enclose_one() {
        let e = enclose(&GoldenNumber::one(), 10);
        assert!(e.contains(&GoldenNumber::one()));
        assert!(e.width() <= rational(1, 1024));
    }

    #[test]
    fn enclose_tau_matches_bisection_oracle() {
        let e = enclose(&tau(), 20);
        let (blo, bhi) = tau_by_bisection(24);
        let mid = (&blo + &bhi) / BigInt::from(2);
        assert!(e.contains_rational(&mid));
        assert!(e.contains(&tau()));
        let (lo, hi) = e.to_f64_bounds();
        assert!(lo <= 1.618_033_9 && 1.618_034 <= hi);
    }

    #[test]
    fn enclosures_are_nested() {
        let x = &tau() * &GoldenNumber::from_ratio(-7, 3);
        let mut prev = enclose(&x, 1);
        for p in 2..80 {
            let cur = enclose(&x, p);
            assert!(cur.is_subset(&prev), "p = {p}");
            assert!(cur.contains(&x));
            prev = cur;
        }
    }

    #[test]
    fn interval_ops_enclose() {
        let a = enclose(&tau(), 30);
        let b = enclose(&GoldenNumber::from_ratio(-1, 3), 30);
        let t = tau();
        let c = GoldenNumber::from_ratio(-1, 3);
        assert!(a.add(&b).contains(&(&t + &c)));
        assert!(a.mul(&b).contains(&(&t * &c)));
    }
}
