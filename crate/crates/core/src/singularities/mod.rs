//! Certified enumeration of the real singular points of a projective
//! surface `F = 0`, with classification, orbit decomposition under the
//! icosahedral group, and location on the special lines and planes.
//!
//! Real projective 3-space is covered by the four unit boxes `[-1,1]³` of
//! the charts `w = 1`, `z = 1`, `y = 1`, `x = 1`: every point has a
//! coordinate of largest modulus, and dividing by it lands in that chart's
//! box. In each chart the critical-point system `∇f = 0` is solved by
//! certified subdivision with `f = 0` as a guard; Euler's identity makes
//! the remaining partial derivative vanish automatically.

mod classify;
mod midline;
mod orbits;
mod report;
mod scan;

use serde::Serialize;

use crate::exactnum::{GoldenNumber, Interval};
use crate::multipoly::{MultiPoly, Var};
use crate::rootcert::{cube, subdivide_search, IBox, SearchOptions, SquareSystem};

pub use classify::{classify, hessian_determinant, PointLocation};
pub use midline::{exact_midline_solve, LineError, LinePoint, LineRoot};
pub use orbits::{locate, orbit_decompose, same_point, Orbit, OrbitError, SpecialLocus};
pub use report::{
    analyze, build_report, verify, Analysis, OrbitSummary, Reproducibility, SingularityReport, UnresolvedBox,
    Verification,
};
pub use scan::{
    critical_values_on_mirror, default_decic_sweep, derive_decic_parameters, family_scan, recognize_golden,
    CandidateResult, Crossing, DecicDerivation, MirrorCritical, ScanEntry, ScanReport,
};

type P = MultiPoly<GoldenNumber>;
type I = Interval<f64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SingularError {
    #[error("the surface equation is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} is too small; need at least 2")]
    DegreeTooSmall(u32),
}

/// One of the four standard affine charts, named by the coordinate set to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Chart {
    W,
    Z,
    Y,
    X,
}

impl Chart {
    pub const ALL: [Chart; 4] = [Chart::W, Chart::Z, Chart::Y, Chart::X];

    pub fn fixed(self) -> Var {
        match self {
            Chart::W => Var::W,
            Chart::Z => Var::Z,
            Chart::Y => Var::Y,
            Chart::X => Var::X,
        }
    }

    /// The free chart variables, in coordinate order.
    pub fn vars(self) -> [Var; 3] {
        match self {
            Chart::W => [Var::X, Var::Y, Var::Z],
            Chart::Z => [Var::X, Var::Y, Var::W],
            Chart::Y => [Var::X, Var::Z, Var::W],
            Chart::X => [Var::Y, Var::Z, Var::W],
        }
    }

    /// The chart polynomial `F` with the fixed coordinate set to 1.
    pub fn restrict(self, f: &P) -> P {
        f.set_var_one(self.fixed())
    }

    /// Homogeneous coordinates `(x, y, z, w)` of a chart box.
    pub fn homogeneous<T: Clone>(self, chart: &[T; 3], one: T) -> [T; 4] {
        let mut out: [Option<T>; 4] = [None, None, None, None];
        out[self.fixed().index()] = Some(one);
        for (v, c) in self.vars().iter().zip(chart) {
            out[v.index()] = Some(c.clone());
        }
        out.map(|c| c.expect("all four coordinates set"))
    }
}

/// A1 (node), A2 (cusp), or something worse. `corank` is `None` when the
/// rank could not be decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularityType {
    A1,
    A2,
    Degenerate { corank: Option<u8> },
}

impl std::fmt::Display for SingularityType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularityType::A1 => write!(f, "A1"),
            SingularityType::A2 => write!(f, "A2"),
            SingularityType::Degenerate { corank: Some(k) } => write!(f, "degenerate(corank={k})"),
            SingularityType::Degenerate { corank: None } => write!(f, "degenerate(unknown)"),
        }
    }
}

impl Serialize for SingularityType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A certified real singular point.
#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub chart: Chart,
    /// Tight enclosure in chart coordinates.
    pub enclosure: IBox<f64>,
    /// Region in which the point is the unique critical point of the chart
    /// polynomial.
    pub region: IBox<f64>,
    pub kind: SingularityType,
    pub orbit: Option<usize>,
    pub on_mid_line: Option<usize>,
    pub on_symmetry_plane: Option<usize>,
    pub on_mirror_plane: Option<usize>,
}

impl SingularPoint {
    /// Homogeneous interval coordinates `(x, y, z, w)`.
    pub fn homogeneous(&self) -> [I; 4] {
        self.chart.homogeneous(&self.enclosure, I::one())
    }

    /// Midpoint representative, normalized to unit Euclidean length with
    /// the first clearly nonzero coordinate positive.
    pub fn representative(&self) -> [f64; 4] {
        let h = self.homogeneous().map(|v| v.mid());
        let n = h.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut r = h.map(|v| v / n);
        if let Some(first) = r.iter().find(|v| v.abs() > 1e-9) {
            if *first < 0.0 {
                r = r.map(|v| -v);
            }
        }
        r.map(|v| if v.abs() < 1e-15 { 0.0 } else { v })
    }
}

#[derive(Clone, Debug)]
pub struct SearchSettings {
    pub search: SearchOptions,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings {
            search: SearchOptions::default(),
        }
    }
}

/// Output of [`find_singular_points`].
#[derive(Clone, Debug)]
pub struct SingularSet {
    /// Deduplicated points, sorted by representative.
    pub points: Vec<SingularPoint>,
    /// Boxes no chart search could decide; nonempty means the point list
    /// may be incomplete.
    pub unresolved: Vec<(Chart, IBox<f64>)>,
    /// Critical points of a chart polynomial that are not on the surface.
    pub discarded_critical_points: usize,
    pub boxes_processed: usize,
}

impl SingularSet {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// All real projective singular points of `F = 0`.
pub fn find_singular_points(f: &P, settings: &SearchSettings) -> Result<SingularSet, SingularError> {
    if !f.is_homogeneous() {
        return Err(SingularError::NotHomogeneous);
    }
    if f.degree() < 2 {
        return Err(SingularError::DegreeTooSmall(f.degree()));
    }
    let domain = cube(-1.0, 1.0);
    let mut found: Vec<SingularPoint> = Vec::new();
    let mut unresolved = Vec::new();
    let mut discarded = 0;
    let mut boxes = 0;
    for chart in Chart::ALL {
        let fc = chart.restrict(f);
        let sys = SquareSystem::<f64>::singular_system(&fc, chart.vars());
        let rep = subdivide_search(&sys, &domain, &settings.search);
        boxes += rep.boxes_processed;
        discarded += rep.discarded.len();
        unresolved.extend(rep.unresolved.into_iter().map(|b| (chart, b)));
        for root in rep.roots {
            let kind = classify(&fc, chart, PointLocation::Enclosure(root.enclosure()));
            found.push(SingularPoint {
                chart,
                enclosure: *root.enclosure(),
                region: *root.region(),
                kind,
                orbit: None,
                on_mid_line: None,
                on_symmetry_plane: None,
                on_mirror_plane: None,
            });
        }
    }
    let mut points = dedup_across_charts(found);
    points.sort_by(|a, b| {
        a.representative()
            .partial_cmp(&b.representative())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(SingularSet {
        points,
        unresolved,
        discarded_critical_points: discarded,
        boxes_processed: boxes,
    })
}

/// The chart of the largest coordinate; ties go to the earlier chart.
fn canonical_chart(p: &SingularPoint) -> Chart {
    let h = p.homogeneous().map(|v| v.mid().abs());
    let mut best = Chart::W;
    for c in Chart::ALL {
        if h[c.fixed().index()] > h[best.fixed().index()] * (1.0 + 1e-9) {
            best = c;
        }
    }
    best
}

/// Keeps one certificate per projective point, preferring the one from the
/// point's canonical chart.
fn dedup_across_charts(found: Vec<SingularPoint>) -> Vec<SingularPoint> {
    let mut out: Vec<SingularPoint> = Vec::new();
    for p in found {
        let h = p.homogeneous();
        match out.iter().position(|q| same_point(&q.homogeneous(), &h)) {
            Some(i) => {
                let keep_new = canonical_chart(&p) == p.chart && canonical_chart(&out[i]) != out[i].chart;
                if keep_new {
                    out[i] = p;
                }
            }
            None => out.push(p),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;

    #[test]
    fn chart_round_trip() {
        let h = Chart::Y.homogeneous(&[1, 2, 3], 9);
        assert_eq!(h, [1, 9, 2, 3]);
        assert_eq!(Chart::X.vars(), [Var::Y, Var::Z, Var::W]);
    }

    #[test]
    fn empty_quadric_has_no_singular_points() {
        let f = parse_poly("x^2 + y^2 + z^2 + w^2").unwrap();
        let s = find_singular_points(&f, &SearchSettings::default()).unwrap();
        assert!(s.is_complete());
        assert_eq!(s.count(), 0);
    }

    #[test]
    fn cone_vertex_is_a_node() {
        let f = parse_poly("x^2 + y^2 - z^2").unwrap();
        let s = find_singular_points(&f, &SearchSettings::default()).unwrap();
        assert!(s.is_complete());
        assert_eq!(s.count(), 1);
        assert_eq!(s.points[0].kind, SingularityType::A1);
        let r = s.points[0].representative();
        assert!((r[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_on_chart_boundaries_counted_once() {
        // (x−w)² + (y−w)² − (z−w)² = 0 is a cone with vertex (1:1:1:1)
        let f = parse_poly("(x-w)^2 + (y-w)^2 - (z-w)^2").unwrap();
        let s = find_singular_points(&f, &SearchSettings::default()).unwrap();
        assert!(s.is_complete());
        assert_eq!(s.count(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            find_singular_points(&parse_poly("x^2 + w").unwrap(), &SearchSettings::default()).unwrap_err(),
            SingularError::NotHomogeneous
        );
        assert!(find_singular_points(&parse_poly("x + w").unwrap(), &SearchSettings::default()).is_err());
    }
}
