use std::time::{Duration, Instant};

use serde::Serialize;

use crate::catalog::{miyaoka_bound, record_table, surface_by_name, surfaces, CatalogError, SurfaceArgs};
use crate::exactnum::GoldenNumber;
use crate::icosahedral::{icosahedral_group, is_invariant, IcosaGroup};
use crate::multipoly::MultiPoly;
use crate::rootcert::BoxRecord;

use super::{
    find_singular_points, locate, orbit_decompose, Chart, Orbit, OrbitError, SearchSettings, SingularError,
    SingularSet, SingularityType, SpecialLocus,
};

/// Search, orbit decomposition and location in one pass.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub set: SingularSet,
    /// `None` when no group was supplied.
    pub orbits: Option<Result<Vec<Orbit>, OrbitError>>,
    pub elapsed: Duration,
}

impl Analysis {
    pub fn all_a1(&self) -> bool {
        self.set.points.iter().all(|p| p.kind == SingularityType::A1)
    }
}

pub fn analyze(
    f: &MultiPoly<GoldenNumber>,
    settings: &SearchSettings,
    group: Option<&IcosaGroup>,
) -> Result<Analysis, SingularError> {
    let start = Instant::now();
    let mut set = find_singular_points(f, settings)?;
    let orbits = group.map(|g| {
        locate(&mut set.points, &SpecialLocus::icosahedral(g));
        orbit_decompose(&mut set.points, g)
    });
    Ok(Analysis {
        set,
        orbits,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub size: usize,
    #[serde(rename = "type")]
    pub kind: SingularityType,
    /// Unit-length homogeneous `(x, y, z, w)`.
    pub representative: [f64; 4],
    pub on_mid_line: bool,
    pub on_plane: bool,
    pub on_mirror_plane: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnresolvedBox {
    pub chart: Chart,
    #[serde(flatten)]
    pub bounds: BoxRecord,
}

/// Everything needed to rerun a computation.
#[derive(Clone, Debug, Serialize)]
pub struct Reproducibility {
    pub parameters: Vec<(String, String)>,
    pub arithmetic: &'static str,
    pub target_radius: f64,
    pub inflation_width: f64,
    pub max_depth: u32,
    pub max_boxes: usize,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityReport {
    pub surface: String,
    pub degree: u32,
    pub parameters: Vec<(String, String)>,
    pub total_count: usize,
    pub all_a1: bool,
    pub complete: bool,
    pub orbits: Vec<OrbitSummary>,
    /// Set when the points are not closed under the group.
    pub orbit_error: Option<String>,
    pub unresolved_boxes: Vec<UnresolvedBox>,
    pub discarded_critical_points: usize,
    pub boxes_processed: usize,
    pub miyaoka_bound: Option<u64>,
    pub best_known: Option<u64>,
    pub runtime_seconds: f64,
    pub reproducibility: Reproducibility,
}

pub fn build_report(
    surface: &str,
    degree: u32,
    parameters: &[(String, String)],
    analysis: &Analysis,
    settings: &SearchSettings,
) -> SingularityReport {
    let set = &analysis.set;
    let (orbits, orbit_error) = match &analysis.orbits {
        Some(Ok(orbits)) => (
            orbits
                .iter()
                .map(|o| {
                    let p = &set.points[o.members[0]];
                    OrbitSummary {
                        size: o.size,
                        kind: o.kind,
                        representative: p.representative(),
                        on_mid_line: p.on_mid_line.is_some(),
                        on_plane: p.on_symmetry_plane.is_some(),
                        on_mirror_plane: p.on_mirror_plane.is_some(),
                    }
                })
                .collect(),
            None,
        ),
        Some(Err(e)) => (Vec::new(), Some(e.to_string())),
        None => (Vec::new(), None),
    };
    let opts = &settings.search;
    SingularityReport {
        surface: surface.to_string(),
        degree,
        parameters: parameters.to_vec(),
        total_count: set.count(),
        all_a1: analysis.all_a1(),
        complete: set.is_complete(),
        orbits,
        orbit_error,
        unresolved_boxes: set
            .unresolved
            .iter()
            .map(|(chart, b)| UnresolvedBox {
                chart: *chart,
                bounds: BoxRecord::new(b),
            })
            .collect(),
        discarded_critical_points: set.discarded_critical_points,
        boxes_processed: set.boxes_processed,
        miyaoka_bound: miyaoka_bound(degree).ok(),
        best_known: record_table().into_iter().find(|r| r.degree == degree).map(|r| r.nodes),
        runtime_seconds: analysis.elapsed.as_secs_f64(),
        reproducibility: Reproducibility {
            parameters: parameters.to_vec(),
            arithmetic: "exact Q(sqrt5) coefficients; outward-rounded f64 intervals",
            target_radius: opts.target_radius,
            inflation_width: opts.inflation_width,
            max_depth: opts.max_depth,
            max_boxes: opts.max_boxes,
            version: env!("CARGO_PKG_VERSION"),
        },
    }
}

/// Outcome of checking a catalog surface against its expected node count.
#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub expected_nodes: Option<u64>,
    pub passed: bool,
    /// One line per failed check; empty when `passed`.
    pub discrepancies: Vec<String>,
    pub report: SingularityReport,
}

impl Verification {
    /// `"65 nodes certified (bound 66)"`.
    pub fn summary(&self) -> String {
        let n = self.report.total_count;
        let noun = if n == 1 { "node" } else { "nodes" };
        match self.report.miyaoka_bound {
            Some(b) => format!("{n} {noun} certified (bound {b})"),
            None => format!("{n} {noun} certified"),
        }
    }
}

/// Certifies the singular points of a catalog surface and compares them
/// with the catalog: the count must equal the expected count, every point
/// must be a node, no box may stay unresolved, the count may not exceed
/// the node bound, and for invariant surfaces the points must split into
/// group orbits.
pub fn verify(name: &str, args: &SurfaceArgs, settings: &SearchSettings) -> Result<Verification, CatalogError> {
    let (f, parameters) = surface_by_name(name, args)?;
    let pinned = parameters != surface_by_name(name, &SurfaceArgs::default())?.1;
    let expected = surfaces()
        .into_iter()
        .find(|e| e.name == name)
        .and_then(|e| e.expected_nodes)
        .filter(|_| !pinned);
    let group = icosahedral_group();
    let symmetric = is_invariant(group, &f);
    let analysis = analyze(&f, settings, symmetric.then_some(group)).expect("catalog forms are homogeneous");
    let report = build_report(name, f.degree(), &parameters, &analysis, settings);

    let mut discrepancies = Vec::new();
    let n = report.total_count as u64;
    match expected {
        Some(e) if e != n => discrepancies.push(format!("certified {n} singular points, expected {e}")),
        None => discrepancies.push("no expected count for these parameters".to_string()),
        _ => {}
    }
    if !report.all_a1 {
        let other = analysis.set.points.iter().filter(|p| p.kind != SingularityType::A1).count();
        discrepancies.push(format!("{other} singular points are not nodes"));
    }
    if !report.complete {
        discrepancies.push(format!("{} boxes unresolved", report.unresolved_boxes.len()));
    }
    if let Some(b) = report.miyaoka_bound.filter(|b| n > *b) {
        discrepancies.push(format!("{n} nodes exceed the bound {b}"));
    }
    if let Some(e) = &report.orbit_error {
        discrepancies.push(format!("orbit decomposition failed: {e}"));
    }
    Ok(Verification {
        expected_nodes: expected,
        passed: discrepancies.is_empty(),
        discrepancies,
        report,
    })
}
