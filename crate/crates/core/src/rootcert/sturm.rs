use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{rational_to_f64_bounds, GoldenNumber};
use crate::multipoly::UniPoly;

use super::RootError;

type GPoly = UniPoly<GoldenNumber>;

/// Exact value of `p` at a rational point.
pub fn eval_rational(p: &GPoly, x: &BigRational) -> GoldenNumber {
    p.coeffs()
        .iter()
        .rev()
        .fold(GoldenNumber::zero(), |acc, c| &acc.scale(x) + c)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Left,
    Right,
}

/// Sign of `p` just to one side of `x`: the sign of the first nonvanishing
/// derivative, flipped for odd orders on the left.
fn one_sided_sign(p: &GPoly, x: &BigRational, side: Side) -> i8 {
    let mut q = p.clone();
    let mut order = 0usize;
    loop {
        let s = eval_rational(&q, x).signum();
        if s != 0 {
            return if side == Side::Left && order % 2 == 1 { -s } else { s };
        }
        q = q.derivative();
        order += 1;
    }
}

/// Sturm chain `p, p', −rem(p, p'), …`, valid for any nonzero `p`
/// (repeated roots are counted once).
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<GPoly>,
}

impl SturmSequence {
    /// Isolating intervals for the roots in `[lo, hi)`, in increasing order.
    /// The sequence must come from a square-free polynomial.
    pub fn isolate(&self, lo: &BigRational, hi: &BigRational) -> Vec<IsolatingInterval> {
        isolate_with(self, lo, hi)
    }

    pub fn new(p: &GPoly) -> Result<Self, RootError> {
        if p.is_zero() {
            return Err(RootError::ZeroPolynomial);
        }
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]).expect("nonzero divisor");
                if r.is_zero() {
                    break;
                }
                chain.push(-&r);
            }
        }
        Ok(SturmSequence { chain })
    }

    pub fn polynomial(&self) -> &GPoly {
        &self.chain[0]
    }

    fn variations(&self, x: &BigRational, side: Side) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|q| one_sided_sign(q, x, side))
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count_left_open(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations(lo, Side::Right) - self.variations(hi, Side::Right)
    }

    /// Distinct real roots in `[lo, hi)`.
    pub fn count_right_open(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations(lo, Side::Left) - self.variations(hi, Side::Left)
    }
}

/// Number of distinct real roots of `p` in `(lo, hi]`. Endpoints that are
/// roots need no special treatment: signs are taken as one-sided limits.
pub fn sturm_count(p: &GPoly, lo: &BigRational, hi: &BigRational) -> Result<usize, RootError> {
    Ok(SturmSequence::new(p)?.count_left_open(lo, hi))
}

/// Cauchy bound: every real root lies in `(−B, B)`.
pub fn root_bound(p: &GPoly) -> Result<BigRational, RootError> {
    let lead = p.leading().ok_or(RootError::ZeroPolynomial)?.abs();
    let mut bits = 32;
    let lead_lo = loop {
        let (lo, _) = lead.rational_bounds(bits);
        if lo.is_positive() {
            break lo;
        }
        bits *= 2;
    };
    let mut max = BigRational::zero();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let (_, hi) = c.abs().rational_bounds(32);
        if hi > max {
            max = hi;
        }
    }
    Ok(BigRational::one() + max / lead_lo)
}

/// `[lo, hi)` containing exactly one root of the polynomial it was isolated
/// for. Adjacent intervals share an endpoint but never a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    /// Double bounds enclosing the whole interval.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (rational_to_f64_bounds(&self.lo).0, rational_to_f64_bounds(&self.hi).1)
    }

    /// Bisect until the width is at most `max_width`.
    pub fn refine(&self, seq: &SturmSequence, max_width: &BigRational) -> IsolatingInterval {
        let mut cur = self.clone();
        while &cur.width() > max_width {
            let m = cur.midpoint();
            if seq.count_right_open(&cur.lo, &m) == 1 {
                cur.hi = m;
            } else {
                cur.lo = m;
            }
        }
        cur
    }
}

/// Isolating intervals for the distinct real roots of `p` in `[lo, hi)`,
/// in increasing order. `p` is reduced to its square-free part first.
pub fn isolate_roots(
    p: &GPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<Vec<IsolatingInterval>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if lo > hi {
        return Err(RootError::EmptyRange);
    }
    let seq = SturmSequence::new(&p.square_free())?;
    Ok(isolate_with(&seq, lo, hi))
}

/// Isolation over every real root.
pub fn isolate_all_roots(p: &GPoly) -> Result<Vec<IsolatingInterval>, RootError> {
    let b = root_bound(p)?;
    isolate_roots(p, &-b.clone(), &b)
}

fn isolate_with(
    seq: &SturmSequence,
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<IsolatingInterval> {
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), seq.count_right_open(lo, hi))];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(IsolatingInterval { lo: a, hi: b }),
            _ => {
                let m = (&a + &b) / BigInt::from(2);
                let left = seq.count_right_open(&a, &m);
                stack.push((m.clone(), b, n - left));
                stack.push((a, m, left));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rational, tau};

    fn g(n: i64) -> GoldenNumber {
        GoldenNumber::from_int(n)
    }

    fn q(n: i64) -> BigRational {
        rational(n, 1)
    }

    #[test]
    fn simple_counts() {
        let p = UniPoly::new(vec![g(-2), g(0), g(1)]);
        assert_eq!(sturm_count(&p, &q(0), &q(2)).unwrap(), 1);
        let cubic = UniPoly::from_roots(&[g(1), g(2), g(3)]);
        assert_eq!(sturm_count(&cubic, &q(0), &q(4)).unwrap(), 3);
        assert!(sturm_count(&UniPoly::zero(), &q(0), &q(1)).is_err());
    }

    #[test]
    fn root_endpoints_are_half_open() {
        let cubic = UniPoly::from_roots(&[g(1), g(2), g(3)]);
        let seq = SturmSequence::new(&cubic).unwrap();
        assert_eq!(seq.count_left_open(&q(1), &q(2)), 1);
        assert_eq!(seq.count_right_open(&q(1), &q(2)), 1);
        assert_eq!(seq.count_left_open(&q(1), &q(3)), 2);
        assert_eq!(seq.count_right_open(&q(1), &q(3)), 2);
        // partitions add up, shared endpoints counted once
        assert_eq!(
            seq.count_right_open(&q(0), &q(2)) + seq.count_right_open(&q(2), &q(4)),
            3
        );
    }

    #[test]
    fn repeated_roots_counted_once() {
        let p = UniPoly::from_roots(&[g(1), g(1), g(1), tau()]);
        assert_eq!(sturm_count(&p, &q(-5), &q(5)).unwrap(), 2);
        let iv = isolate_roots(&p, &q(-5), &q(5)).unwrap();
        assert_eq!(iv.len(), 2);
        let sq = UniPoly::from_roots(&[g(1), g(1)]);
        let iv = isolate_roots(&sq, &q(-2), &q(2)).unwrap();
        assert_eq!(iv.len(), 1);
        assert!(iv[0].lo <= q(1) && q(1) < iv[0].hi);
    }

    #[test]
    fn isolates_plus_minus_one() {
        let p = UniPoly::new(vec![g(-1), g(0), g(1)]);
        let iv = isolate_roots(&p, &q(-2), &q(2)).unwrap();
        assert_eq!(iv.len(), 2);
        assert!(iv[0].hi <= q(0) && iv[0].lo <= q(-1) && q(-1) < iv[0].hi);
        assert!(iv[1].lo >= q(0) && iv[1].lo <= q(1) && q(1) < iv[1].hi);
    }

    #[test]
    fn refines_tau() {
        let p = UniPoly::new(vec![g(-1), g(-1), g(1)]);
        let roots = isolate_all_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        let seq = SturmSequence::new(&p).unwrap();
        let r = roots[1].refine(&seq, &rational(1, 1 << 40));
        let (lo, hi) = r.to_f64_bounds();
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(lo <= t && t <= hi && hi - lo < 1e-11);
    }

    #[test]
    fn golden_coefficients() {
        // (t − τ)(t + τ⁻¹)(t − √5) has roots τ, 1 − τ, √5
        let p = UniPoly::from_roots(&[tau(), &g(1) - &tau(), crate::exactnum::sqrt5()]);
        assert_eq!(isolate_all_roots(&p).unwrap().len(), 3);
        assert_eq!(sturm_count(&p, &q(1), &q(2)).unwrap(), 1);
        // 1.618 < 2 < 2.236: one root in (2, 3]
        assert_eq!(sturm_count(&p, &q(2), &q(3)).unwrap(), 1);
    }

    #[test]
    fn scaling_invariance() {
        let p = UniPoly::from_roots(&[g(-3), rational(1, 3).into(), tau(), g(7)]);
        let s = p.scale(&GoldenNumber::from_ratio(-5, 11));
        for (a, b) in [(-4, 0), (0, 1), (-10, 10), (1, 7)] {
            assert_eq!(
                sturm_count(&p, &q(a), &q(b)).unwrap(),
                sturm_count(&s, &q(a), &q(b)).unwrap()
            );
        }
    }
}
