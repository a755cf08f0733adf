use serde::Serialize;

use crate::exactnum::Interval;
use crate::icosahedral::{IcosaGroup, Vec3};

use super::{SingularPoint, SingularityType};

type I = Interval<f64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("image of point {point} under group element {element} is not in the point set")]
    MissingImage { point: usize, element: usize },
}

/// `true` when two interval representatives may describe the same
/// projective point: both are scaled by the coordinate of largest modulus
/// of the first, and all four coordinates must overlap.
pub fn same_point(a: &[I; 4], b: &[I; 4]) -> bool {
    let mut k = 0;
    for i in 1..4 {
        if a[i].mid().abs() > a[k].mid().abs() {
            k = i;
        }
    }
    if a[k].strict_sign().is_none() || b[k].strict_sign().is_none() {
        return false;
    }
    (0..4).all(|i| match (a[i].checked_div(&a[k]), b[i].checked_div(&b[k])) {
        (Some(x), Some(y)) => x.intersect(&y).is_some(),
        _ => false,
    })
}

fn apply(m: &[[I; 3]; 3], p: &[I; 4]) -> [I; 4] {
    let mut out = [I::zero(), I::zero(), I::zero(), p[3]];
    for i in 0..3 {
        for j in 0..3 {
            out[i] = out[i] + m[i][j] * p[j];
        }
    }
    out
}

/// An orbit of singular points under the group.
#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    /// Indices into the point list, ascending; the first is the representative.
    pub members: Vec<usize>,
    pub size: usize,
    pub kind: SingularityType,
}

/// Partition `points` into orbits, writing each point's orbit index.
///
/// Every image `g·p` must overlap some point of the set; a missing image
/// means the set is not closed under the group, i.e. the search missed a
/// point.
pub fn orbit_decompose(points: &mut [SingularPoint], group: &IcosaGroup) -> Result<Vec<Orbit>, OrbitError> {
    let mats: Vec<[[I; 3]; 3]> = group
        .elements()
        .iter()
        .map(|g| g.matrix().clone().map(|row| row.map(|x| I::from_golden(&x))))
        .collect();
    let homog: Vec<[I; 4]> = points.iter().map(|p| p.homogeneous()).collect();
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for (e, m) in mats.iter().enumerate() {
            let img = apply(m, &homog[i]);
            let j = (0..n)
                .find(|&j| same_point(&img, &homog[j]))
                .ok_or(OrbitError::MissingImage { point: i, element: e })?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbits: Vec<Orbit> = Vec::new();
    let mut index_of_root = std::collections::HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let k = *index_of_root.entry(r).or_insert_with(|| {
            orbits.push(Orbit {
                members: Vec::new(),
                size: 0,
                kind: points[i].kind,
            });
            orbits.len() - 1
        });
        orbits[k].members.push(i);
        orbits[k].size += 1;
        if points[i].kind != orbits[k].kind {
            orbits[k].kind = SingularityType::Degenerate { corank: None };
        }
        points[i].orbit = Some(k);
    }
    Ok(orbits)
}

/// The special lines and planes through the origin used for tagging.
#[derive(Clone, Debug)]
pub struct SpecialLocus {
    /// Directions of the 15 mid-lines.
    pub mid_lines: Vec<Vec3>,
    /// Normals of the 10 planes orthogonal to the three-fold axes.
    pub symmetry_planes: Vec<Vec3>,
    /// Normals of the 15 mirror planes.
    pub mirror_planes: Vec<Vec3>,
}

impl SpecialLocus {
    pub fn icosahedral(group: &IcosaGroup) -> Self {
        SpecialLocus {
            mid_lines: crate::icosahedral::mid_lines(group),
            symmetry_planes: crate::icosahedral::symmetry_planes(group),
            mirror_planes: crate::icosahedral::mirror_planes(group),
        }
    }
}

fn to_intervals(v: &Vec3) -> [I; 3] {
    v.clone().map(|x| I::from_golden(&x))
}

/// Tag each point with the first mid-line, symmetry plane and mirror plane
/// whose interval membership test it passes. The point `(0:0:0:1)` lies on
/// every such line and plane.
pub fn locate(points: &mut [SingularPoint], locus: &SpecialLocus) {
    let lines: Vec<[I; 3]> = locus.mid_lines.iter().map(to_intervals).collect();
    let planes: Vec<[I; 3]> = locus.symmetry_planes.iter().map(to_intervals).collect();
    let mirrors: Vec<[I; 3]> = locus.mirror_planes.iter().map(to_intervals).collect();
    for p in points.iter_mut() {
        let h = p.homogeneous();
        let u = [h[0], h[1], h[2]];
        p.on_mid_line = lines.iter().position(|a| {
            let c = [
                u[1] * a[2] - u[2] * a[1],
                u[2] * a[0] - u[0] * a[2],
                u[0] * a[1] - u[1] * a[0],
            ];
            c.iter().all(I::contains_zero)
        });
        let on_plane = |n: &[I; 3]| (u[0] * n[0] + u[1] * n[1] + u[2] * n[2]).contains_zero();
        p.on_symmetry_plane = planes.iter().position(on_plane);
        p.on_mirror_plane = mirrors.iter().position(on_plane);
    }
}
