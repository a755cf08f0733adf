use std::ops::{Add, Mul, Neg, Sub};

use crate::exactnum::{Coefficient, Field};

/// Dense univariate polynomial, coefficients from low to high degree,
/// with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly<K> {
    coeffs: Vec<K>,
}

impl<K: Coefficient> UniPoly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![K::zero(), K::one()])
    }

    /// Product of `(t − r)` over the given roots.
    pub fn from_roots(roots: &[K]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), K::one()])
        })
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &K) -> K {
        self.coeffs
            .iter()
            .rev()
            .fold(K::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * K::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &K) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn map_coeffs<L: Coefficient>(&self, f: impl FnMut(&K) -> L) -> UniPoly<L> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// `p(−t)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }
}

impl<K: Field> UniPoly<K> {
    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.leading()?.checked_inv()?;
        let dd = d.degree()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![K::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * dl.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &Self) -> Option<Self> {
        self.div_rem(d).map(|(_, r)| r)
    }

    /// Scaled to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading().and_then(|l| l.checked_inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd is nonzero").0
    }
}

impl<'a, K: Coefficient> Add<&'a UniPoly<K>> for &'a UniPoly<K> {
    type Output = UniPoly<K>;
    fn add(self, rhs: &UniPoly<K>) -> UniPoly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(K::zero);
                    let b = rhs.coeffs.get(k).cloned().unwrap_or_else(K::zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl<'a, K: Coefficient> Sub<&'a UniPoly<K>> for &'a UniPoly<K> {
    type Output = UniPoly<K>;
    fn sub(self, rhs: &UniPoly<K>) -> UniPoly<K> {
        self + &(-rhs)
    }
}

impl<K: Coefficient> Neg for &UniPoly<K> {
    type Output = UniPoly<K>;
    fn neg(self) -> UniPoly<K> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<'a, K: Coefficient> Mul<&'a UniPoly<K>> for &'a UniPoly<K> {
    type Output = UniPoly<K>;
    fn mul(self, rhs: &UniPoly<K>) -> UniPoly<K> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{tau, GoldenNumber};

    fn g(n: i64) -> GoldenNumber {
        GoldenNumber::from_int(n)
    }

    #[test]
    fn gcd_and_square_free() {
        let p = UniPoly::from_roots(&[g(1), g(1), g(2), tau()]);
        let q = UniPoly::from_roots(&[g(1), tau(), g(5)]);
        assert_eq!(p.gcd(&q), UniPoly::from_roots(&[g(1), tau()]));
        assert_eq!(p.square_free(), UniPoly::from_roots(&[g(1), g(2), tau()]));
        let double = UniPoly::from_roots(&[g(1), g(1)]);
        assert_eq!(double.square_free(), UniPoly::from_roots(&[g(1)]));
    }

    #[test]
    fn division_identity() {
        let a = UniPoly::new(vec![g(3), tau(), g(0), g(-2), g(7)]);
        let b = UniPoly::new(vec![tau(), g(1), g(2)]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
        assert!(a.div_rem(&UniPoly::zero()).is_none());
    }

    #[test]
    fn eval_and_derivative() {
        let p = UniPoly::new(vec![g(-1), g(0), g(1)]);
        assert_eq!(p.eval(&g(3)), g(8));
        assert_eq!(p.derivative(), UniPoly::new(vec![g(0), g(2)]));
        assert_eq!(p.reflect(), p);
    }
}
