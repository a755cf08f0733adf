use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exactnum::{Coefficient, GoldenNumber};

use super::univariate::UniPoly;
use super::PolyError;

/// Exponents of `x, y, z, w`.
pub type Exponent = [u8; 4];

/// Coordinate variables, in exponent-vector order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
    W = 3,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::Z, Var::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        ['x', 'y', 'z', 'w'][self as usize]
    }
}

fn total(e: &Exponent) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

/// Sparse polynomial in `x, y, z, w`.
///
/// Terms live in a `BTreeMap` keyed by exponent vector and zero
/// coefficients are never stored, so equal polynomials compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<K> {
    terms: BTreeMap<Exponent, K>,
    degree: u32,
}

impl<K: Coefficient> MultiPoly<K> {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
            degree: 0,
        }
    }

    pub fn constant(c: K) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Self::monomial(K::one(), e)
    }

    pub fn monomial(c: K, exp: Exponent) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, K)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: Exponent, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&exp);
                    self.recompute_degree();
                } else {
                    *v = s;
                }
            }
            None => {
                self.degree = self.degree.max(total(&exp));
                self.terms.insert(exp, c);
            }
        }
    }

    fn recompute_degree(&mut self) {
        self.degree = self.terms.keys().map(total).max().unwrap_or(0);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|e| e[v.index()] as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &K)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &Exponent) -> K {
        self.terms.get(exp).cloned().unwrap_or_else(K::zero)
    }

    /// Constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<K> {
        if self.terms.keys().all(|e| *e == [0; 4]) {
            Some(self.coefficient(&[0; 4]))
        } else {
            None
        }
    }

    pub fn uses_var(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.index()] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|e| total(e) == self.degree)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(e, k)| (*e, k.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<L: Coefficient>(&self, mut f: impl FnMut(&K) -> L) -> MultiPoly<L> {
        MultiPoly::from_terms(self.terms.iter().map(|(e, k)| (*e, f(k))))
    }

    /// Exact value at a point.
    pub fn evaluate(&self, pt: &[K; 4]) -> K {
        let mut powers: [Vec<K>; 4] = Default::default();
        for (i, v) in Var::ALL.iter().enumerate() {
            let d = self.degree_in(*v) as usize;
            let mut p = Vec::with_capacity(d + 1);
            p.push(K::one());
            for k in 1..=d {
                let next = p[k - 1].clone() * pt[i].clone();
                p.push(next);
            }
            powers[i] = p;
        }
        let mut acc = K::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..4 {
                if e[i] > 0 {
                    t = t * powers[i][e[i] as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v.index();
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut ne = *e;
            ne[i] -= 1;
            (ne, c.clone() * K::from_i64(e[i] as i64))
        }))
    }

    /// `(∂/∂x, ∂/∂y, ∂/∂z, ∂/∂w)`.
    pub fn gradient(&self) -> [Self; 4] {
        Var::ALL.map(|v| self.derivative(v))
    }

    /// Symmetric matrix of second partials.
    pub fn hessian(&self) -> [[Self; 4]; 4] {
        let g = self.gradient();
        let mut h: [[Self; 4]; 4] = Default::default();
        for i in 0..4 {
            for j in i..4 {
                let d = g[i].derivative(Var::ALL[j]);
                h[j][i] = d.clone();
                h[i][j] = d;
            }
        }
        h
    }

    /// Multiply each monomial by the power of `w` that brings it to
    /// `target_degree`. The input must not involve `w`.
    pub fn homogenize(&self, target_degree: u32) -> Result<Self, PolyError> {
        if self.uses_var(Var::W) {
            return Err(PolyError::UsesW);
        }
        if target_degree < self.degree || target_degree > u8::MAX as u32 {
            return Err(PolyError::DegreeTooSmall {
                target: target_degree,
                degree: self.degree,
            });
        }
        Ok(Self::from_terms(self.terms.iter().map(|(e, c)| {
            let mut ne = *e;
            ne[3] = (target_degree - total(e)) as u8;
            (ne, c.clone())
        })))
    }

    /// Set `w = 1`.
    pub fn dehomogenize(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| {
            let mut ne = *e;
            ne[3] = 0;
            (ne, c.clone())
        }))
    }

    /// Set one variable to 1 (the affine chart where that coordinate is 1).
    pub fn set_var_one(&self, v: Var) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| {
            let mut ne = *e;
            ne[v.index()] = 0;
            (ne, c.clone())
        }))
    }

    /// Simultaneous substitution `x_i ↦ images[i]`.
    pub fn substitute(&self, images: &[MultiPoly<K>; 4]) -> Self {
        let mut powers: [Vec<MultiPoly<K>>; 4] = Default::default();
        for (i, v) in Var::ALL.iter().enumerate() {
            let d = self.degree_in(*v) as usize;
            let mut p = vec![Self::one()];
            for k in 1..=d {
                let next = &p[k - 1] * &images[i];
                p.push(next);
            }
            powers[i] = p;
        }
        let mut acc = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for i in 0..4 {
                if e[i] > 0 {
                    t = &t * &powers[i][e[i] as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitute the linear forms `x_i ↦ Σ_j m[i][j]·x_j` for `x, y, z`,
    /// leaving `w` fixed: the composition `p ∘ m`.
    pub fn compose_linear3(&self, m: &[[K; 3]; 3]) -> Self {
        let lin = |row: &[K; 3]| {
            let mut q = Self::zero();
            for (j, c) in row.iter().enumerate() {
                q = &q + &Self::var(Var::ALL[j]).scale(c);
            }
            q
        };
        let images = [lin(&m[0]), lin(&m[1]), lin(&m[2]), Self::var(Var::W)];
        self.substitute(&images)
    }

    /// `t ↦ p(base + t·dir)` as an exact univariate polynomial.
    pub fn restrict_to_line(&self, base: &[K; 4], dir: &[K; 4]) -> UniPoly<K> {
        let lines: Vec<UniPoly<K>> = (0..4)
            .map(|i| UniPoly::new(vec![base[i].clone(), dir[i].clone()]))
            .collect();
        let mut powers: [Vec<UniPoly<K>>; 4] = Default::default();
        for (i, v) in Var::ALL.iter().enumerate() {
            let d = self.degree_in(*v) as usize;
            let mut p = vec![UniPoly::one()];
            for k in 1..=d {
                let next = &p[k - 1] * &lines[i];
                p.push(next);
            }
            powers[i] = p;
        }
        let mut acc = UniPoly::zero();
        for (e, c) in &self.terms {
            let mut t = UniPoly::constant(c.clone());
            for i in 0..4 {
                if e[i] > 0 {
                    t = &t * &powers[i][e[i] as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Re-expand around `origin`: the polynomial `v ↦ p(origin + v)`.
    pub fn translate(&self, origin: &[K; 4]) -> Self {
        let images = Var::ALL.map(|v| {
            &Self::var(v) + &Self::constant(origin[v.index()].clone())
        });
        self.substitute(&images)
    }

    /// Split into homogeneous parts, indexed by degree.
    pub fn homogeneous_parts(&self) -> Vec<Self> {
        let mut parts = vec![Self::zero(); self.degree as usize + 1];
        for (e, c) in &self.terms {
            parts[total(e) as usize].add_term(*e, c.clone());
        }
        parts
    }
}

impl<K: Coefficient> Default for MultiPoly<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, K: Coefficient> Add<&'a MultiPoly<K>> for &'a MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn add(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a, K: Coefficient> Sub<&'a MultiPoly<K>> for &'a MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn sub(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a, K: Coefficient> Mul<&'a MultiPoly<K>> for &'a MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn mul(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
        let mut acc: BTreeMap<Exponent, K> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                let prod = c1.clone() * c2.clone();
                match acc.get_mut(&e) {
                    Some(v) => *v = v.clone() + prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        MultiPoly::from_terms(acc)
    }
}

impl<K: Coefficient> Neg for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        self.map_coeffs(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<K: Coefficient> $tr for MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $m(self, rhs: MultiPoly<K>) -> MultiPoly<K> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<K: Coefficient> Neg for MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        -&self
    }
}

impl MultiPoly<GoldenNumber> {
    /// Double-precision copy (nearest coefficients), for fast non-certified
    /// evaluation such as shading normals.
    pub fn to_f64(&self) -> MultiPoly<f64> {
        self.map_coeffs(|c| c.to_f64())
    }
}

impl<K: Coefficient + fmt::Display> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first, for readability
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| total(b.0).cmp(&total(a.0)).then(b.0.cmp(a.0)));
        for (i, (e, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for v in Var::ALL {
                match e[v.index()] {
                    0 => {}
                    1 => write!(f, "*{}", v.name())?,
                    k => write!(f, "*{}^{k}", v.name())?,
                }
            }
        }
        Ok(())
    }
}

impl<K: Coefficient> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
