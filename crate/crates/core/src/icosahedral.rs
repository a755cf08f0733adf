//! The rotation group of the icosahedron as 60 exact 3×3 matrices over
//! Q(√5), its action on polynomials and points, and the distinguished
//! axes and planes.

use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::catalog;
use crate::exactnum::{tau, GoldenNumber};
use crate::multipoly::MultiPoly;

type G = GoldenNumber;
pub type Vec3 = [GoldenNumber; 3];
pub type Mat3 = [[GoldenNumber; 3]; 3];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("generator is not an exact rotation")]
    NotOrthogonal,
    #[error("closure exceeded {0} elements; generators do not generate a finite rotation group of the expected size")]
    TooLarge(usize),
    #[error("no generator satisfying the constraints was found")]
    NoGenerator,
}

/// An exact rotation matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    m: Mat3,
}

fn zero3() -> Mat3 {
    std::array::from_fn(|_| std::array::from_fn(|_| G::zero()))
}

impl GroupElement {
    pub fn identity() -> Self {
        let mut m = zero3();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = G::one();
        }
        GroupElement { m }
    }

    /// Checks `MᵀM = I` and `det M = 1` exactly.
    pub fn new(m: Mat3) -> Result<Self, GroupError> {
        let g = GroupElement { m };
        if g.is_rotation() {
            Ok(g)
        } else {
            Err(GroupError::NotOrthogonal)
        }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn transpose(&self) -> Self {
        GroupElement {
            m: std::array::from_fn(|i| std::array::from_fn(|j| self.m[j][i].clone())),
        }
    }

    pub fn mul(&self, rhs: &GroupElement) -> GroupElement {
        let mut m = zero3();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc = G::zero();
                for k in 0..3 {
                    acc += &(&self.m[i][k] * &rhs.m[k][j]);
                }
                *out = acc;
            }
        }
        GroupElement { m }
    }

    pub fn pow(&self, n: u32) -> GroupElement {
        (0..n).fold(GroupElement::identity(), |acc, _| acc.mul(self))
    }

    pub fn det(&self) -> GoldenNumber {
        let m = &self.m;
        let t1 = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
        let t2 = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
        let t3 = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
        &(&t1 - &t2) + &t3
    }

    pub fn is_rotation(&self) -> bool {
        self.transpose().mul(self) == GroupElement::identity() && self.det() == G::one()
    }

    /// Smallest `k ≥ 1` with `g^k = 1`, searched up to `limit`.
    pub fn order(&self, limit: u32) -> Option<u32> {
        let id = GroupElement::identity();
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc == id {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        std::array::from_fn(|i| {
            let mut acc = G::zero();
            for (k, vk) in v.iter().enumerate() {
                acc += &(&self.m[i][k] * vk);
            }
            acc
        })
    }

    /// Acts on projective points of 3-space, fixing `w`.
    pub fn apply4(&self, v: &[GoldenNumber; 4]) -> [GoldenNumber; 4] {
        let r = self.apply(&[v[0].clone(), v[1].clone(), v[2].clone()]);
        let [a, b, c] = r;
        [a, b, c, v[3].clone()]
    }

    /// Nearest doubles, for fast numeric work.
    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.m[i][j].to_f64()))
    }

    /// Axis of rotation (the fixed line), canonicalized; `None` for the
    /// identity.
    pub fn axis(&self) -> Option<Vec3> {
        if *self == GroupElement::identity() {
            return None;
        }
        let mut a = self.m.clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= &G::one();
        }
        // kernel of a rank-2 matrix: cross product of two independent rows
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let c = cross(&a[i], &a[j]);
            if c.iter().any(|x| !x.is_zero()) {
                return Some(canonical_direction(&c));
            }
        }
        None
    }
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn dot(a: &Vec3, b: &Vec3) -> GoldenNumber {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

/// Scale so the last nonzero coordinate is 1. Zero vectors are unchanged.
pub fn canonical_direction(v: &Vec3) -> Vec3 {
    match v.iter().rev().find(|x| !x.is_zero()) {
        Some(last) => {
            let inv = last.inv().expect("nonzero");
            v.clone().map(|x| &x * &inv)
        }
        None => v.clone(),
    }
}

/// Canonical representative of a projective point of 3-space: the last
/// nonzero coordinate scaled to 1.
pub fn canonical_projective(v: &[GoldenNumber; 4]) -> [GoldenNumber; 4] {
    match v.iter().rev().find(|x| !x.is_zero()) {
        Some(last) => {
            let inv = last.inv().expect("nonzero");
            v.clone().map(|x| &x * &inv)
        }
        None => v.clone(),
    }
}

/// The cyclic shift `(x,y,z) ↦ (y,z,x)`.
pub fn cyclic_shift() -> GroupElement {
    let mut m = zero3();
    m[0][1] = G::one();
    m[1][2] = G::one();
    m[2][0] = G::one();
    GroupElement { m }
}

/// The half-turn `(x,y,z) ↦ (−x,−y,z)`.
pub fn double_sign_flip() -> GroupElement {
    let mut m = zero3();
    m[0][0] = -G::one();
    m[1][1] = -G::one();
    m[2][2] = G::one();
    GroupElement { m }
}

/// All signed arrangements of `(1, τ, τ−1)/2` as rows.
fn half_golden_rows() -> Vec<Vec3> {
    let half = G::from_ratio(1, 2);
    let base = [half.clone(), &tau() * &half, &(&tau() - &G::one()) * &half];
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut rows = Vec::new();
    for p in perms {
        for signs in 0..8u8 {
            let row: Vec3 = std::array::from_fn(|i| {
                let v = base[p[i]].clone();
                if signs >> i & 1 == 1 {
                    -v
                } else {
                    v
                }
            });
            rows.push(row);
        }
    }
    rows
}

/// Exhaustive search over matrices whose rows are signed arrangements of
/// `(1, τ, τ−1)/2` for a rotation of order 5 that preserves the degree-6
/// invariant. Returns the first hit in a fixed enumeration order.
pub fn find_five_fold_generator() -> Result<GroupElement, GroupError> {
    let rows = half_golden_rows();
    let q = catalog::invariant_q();
    let probes: Vec<Vec3> = vec![
        [G::from_int(1), G::from_int(2), G::from_int(3)],
        [G::from_ratio(-2, 3), G::from_int(5), G::from_ratio(1, 7)],
    ];
    let q_at = |v: &Vec3| q.evaluate(&[v[0].clone(), v[1].clone(), v[2].clone(), G::one()]);
    for r0 in &rows {
        for r1 in &rows {
            if !dot(r0, r1).is_zero() {
                continue;
            }
            // det = +1 forces the third row
            let r2 = cross(r0, r1);
            if !rows.contains(&r2) {
                continue;
            }
            let g = GroupElement {
                m: [r0.clone(), r1.clone(), r2],
            };
            if !g.is_rotation() || g.order(5) != Some(5) {
                continue;
            }
            if probes.iter().all(|p| q_at(&g.apply(p)) == q_at(p)) && act_on_poly(&g, &q) == q {
                return Ok(g);
            }
        }
    }
    Err(GroupError::NoGenerator)
}

/// `(C, D, M)`: cyclic shift, double sign flip, and a five-fold rotation.
pub fn generators() -> (GroupElement, GroupElement, GroupElement) {
    static FIVE: OnceLock<GroupElement> = OnceLock::new();
    let m = FIVE
        .get_or_init(|| find_five_fold_generator().expect("five-fold generator exists"))
        .clone();
    (cyclic_shift(), double_sign_flip(), m)
}

/// A finite rotation group given by its elements.
#[derive(Clone, Debug)]
pub struct IcosaGroup {
    elements: Vec<GroupElement>,
}

impl IcosaGroup {
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of elements of order 1, 2, 3, 5 (other orders are not
    /// expected in the icosahedral group and are tallied at index 4).
    pub fn order_census(&self) -> [usize; 5] {
        let mut c = [0; 5];
        for g in &self.elements {
            match g.order(60) {
                Some(1) => c[0] += 1,
                Some(2) => c[1] += 1,
                Some(3) => c[2] += 1,
                Some(5) => c[3] += 1,
                _ => c[4] += 1,
            }
        }
        c
    }

    pub fn elements_of_order(&self, k: u32) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter().filter(move |g| g.order(k) == Some(k))
    }
}

/// Closure of the generators under multiplication, breadth first.
pub fn generate_group(gens: &[GroupElement]) -> Result<IcosaGroup, GroupError> {
    const LIMIT: usize = 120;
    if gens.iter().any(|g| !g.is_rotation()) {
        return Err(GroupError::NotOrthogonal);
    }
    let id = GroupElement::identity();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut elements = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.mul(s);
            if seen.insert(h.clone()) {
                if seen.len() > LIMIT {
                    return Err(GroupError::TooLarge(LIMIT));
                }
                elements.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(IcosaGroup { elements })
}

/// The full icosahedral rotation group, built once.
pub fn icosahedral_group() -> &'static IcosaGroup {
    static GROUP: OnceLock<IcosaGroup> = OnceLock::new();
    GROUP.get_or_init(|| {
        let (c, d, m) = generators();
        generate_group(&[c, d, m]).expect("generators close to a finite group")
    })
}

/// `p ∘ g`, with `w` fixed.
pub fn act_on_poly(g: &GroupElement, p: &MultiPoly<GoldenNumber>) -> MultiPoly<GoldenNumber> {
    p.compose_linear3(&g.m)
}

/// True if `p ∘ g = p` for every element.
pub fn is_invariant(group: &IcosaGroup, p: &MultiPoly<GoldenNumber>) -> bool {
    group.elements.iter().all(|g| &act_on_poly(g, p) == p)
}

/// Orbit of a projective point of 3-space (canonical representatives,
/// in first-seen order).
pub fn orbit(group: &IcosaGroup, pt: &[GoldenNumber; 4]) -> Vec<[GoldenNumber; 4]> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in &group.elements {
        let c = canonical_projective(&g.apply4(pt));
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

/// Orbit of a vector of 3-space (no projective identification).
pub fn vector_orbit(group: &IcosaGroup, v: &Vec3) -> Vec<Vec3> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in &group.elements {
        let w = g.apply(v);
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

fn distinct_axes<'a>(elems: impl Iterator<Item = &'a GroupElement>) -> Vec<Vec3> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in elems {
        if let Some(a) = g.axis() {
            if seen.insert(a.clone()) {
                out.push(a);
            }
        }
    }
    out
}

/// The 15 axes of the half-turns, as canonical directions.
pub fn mid_lines(group: &IcosaGroup) -> Vec<Vec3> {
    distinct_axes(group.elements_of_order(2))
}

/// Normals of the 10 planes orthogonal to the three-fold axes.
pub fn symmetry_planes(group: &IcosaGroup) -> Vec<Vec3> {
    distinct_axes(group.elements_of_order(3))
}

/// The 6 five-fold axes.
pub fn five_fold_axes(group: &IcosaGroup) -> Vec<Vec3> {
    distinct_axes(group.elements_of_order(5))
}

/// Normals of the 15 planes orthogonal to the half-turn axes. Together
/// with `−1` these are the mirror planes of the full symmetry group of
/// every even invariant.
pub fn mirror_planes(group: &IcosaGroup) -> Vec<Vec3> {
    mid_lines(group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;

    fn v(a: i64, b: i64, c: i64) -> Vec3 {
        [G::from_int(a), G::from_int(b), G::from_int(c)]
    }

    #[test]
    fn generator_relations() {
        let (c, d, m) = generators();
        let id = GroupElement::identity();
        assert_eq!(c.pow(3), id);
        assert_eq!(d.pow(2), id);
        assert_eq!(m.pow(5), id);
        assert!(m.is_rotation());
        assert_eq!(m.det(), G::one());
        // every entry is half of 0, ±1, ±τ or ±(τ−1)
        let allowed: Vec<G> = [G::zero(), G::one(), tau(), &tau() - &G::one()]
            .iter()
            .flat_map(|x| [x.clone(), -x.clone()])
            .map(|x| &x * &G::from_ratio(1, 2))
            .collect();
        assert!(m.matrix().iter().flatten().all(|e| allowed.contains(e)));
    }

    #[test]
    fn closures() {
        let (c, d, m) = generators();
        assert_eq!(generate_group(&[c.clone(), d.clone()]).unwrap().len(), 12);
        assert_eq!(generate_group(&[c, d, m]).unwrap().len(), 60);
        assert_eq!(generate_group(&[GroupElement::identity()]).unwrap().len(), 1);
    }

    #[test]
    fn non_rotation_rejected() {
        let mut m = GroupElement::identity().m;
        m[0][0] = G::from_int(2);
        assert_eq!(GroupElement::new(m), Err(GroupError::NotOrthogonal));
    }

    #[test]
    fn census() {
        assert_eq!(icosahedral_group().order_census(), [1, 15, 20, 24, 0]);
    }

    #[test]
    fn closure_properties() {
        let g = icosahedral_group();
        let set: HashSet<_> = g.elements().iter().cloned().collect();
        for a in g.elements() {
            assert!(set.contains(&a.transpose()));
            for b in g.elements().iter().step_by(7) {
                assert!(set.contains(&a.mul(b)));
            }
        }
    }

    #[test]
    fn sphere_is_invariant() {
        let s = parse_poly("x^2+y^2+z^2").unwrap();
        assert!(is_invariant(icosahedral_group(), &s));
        let (c, _, _) = generators();
        let q = catalog::invariant_q();
        assert_eq!(act_on_poly(&c, &q), q);
        assert!(!is_invariant(icosahedral_group(), &parse_poly("x^2").unwrap()));
    }

    #[test]
    fn orbit_sizes() {
        let g = icosahedral_group();
        let p = |a, b, c, d| [G::from_int(a), G::from_int(b), G::from_int(c), G::from_int(d)];
        assert_eq!(orbit(g, &p(0, 0, 1, 0)).len(), 15);
        assert_eq!(orbit(g, &p(1, 1, 1, 0)).len(), 10);
        assert_eq!(vector_orbit(g, &v(0, 0, 1)).len(), 30);
        assert_eq!(vector_orbit(g, &v(1, 1, 1)).len(), 20);
        assert_eq!(orbit(g, &p(1, 2, 7, 3)).len(), 60);
        assert_eq!(orbit(g, &p(1, 1, 1, 1)).len(), 20);
        let five = five_fold_axes(g);
        assert_eq!(five.len(), 6);
        let a = &five[0];
        assert_eq!(orbit(g, &[a[0].clone(), a[1].clone(), a[2].clone(), G::zero()]).len(), 6);
        // tetrahedral subgroup moves the z axis among the ± coordinate axes
        let (c, d, _) = generators();
        let t = generate_group(&[c, d]).unwrap();
        assert_eq!(vector_orbit(&t, &v(0, 0, 1)).len(), 6);
    }

    #[test]
    fn mid_lines_and_planes() {
        let g = icosahedral_group();
        let lines = mid_lines(g);
        assert_eq!(lines.len(), 15);
        for l in &lines {
            let fixing: Vec<_> = g
                .elements_of_order(2)
                .filter(|h| &h.apply(l) == l)
                .collect();
            assert_eq!(fixing.len(), 1);
        }
        // single orbit of lines
        let first = &lines[0];
        let images: HashSet<_> = g
            .elements()
            .iter()
            .map(|h| canonical_direction(&h.apply(first)))
            .collect();
        assert_eq!(images.len(), 15);

        let planes = symmetry_planes(g);
        assert_eq!(planes.len(), 10);
        for n in &planes {
            let r = g.elements_of_order(3).find(|h| &h.apply(n) == n).unwrap();
            // the plane n·v = 0 is invariant: r maps an in-plane vector into the plane
            let inplane = cross(n, &v(1, 2, 3));
            assert!(dot(n, &r.apply(&inplane)).is_zero());
        }
        let normals: HashSet<_> = g
            .elements()
            .iter()
            .map(|h| canonical_direction(&h.apply(&planes[0])))
            .collect();
        assert_eq!(normals.len(), 10);
    }
}
