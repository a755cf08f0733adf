//! Parameter scans over surface families, and the search for decic
//! parameters at which two orbits of extra nodes appear together.
//!
//! For `F = R − β·w²·K²·L²` with `K = r² − 1`, `L = r² − c` (where
//! `r² = x²+y²+z²`), the affine singular points off `K·L = 0` are exactly
//! the critical points of `φ = R/(K²L²)` with critical value `β`. Every
//! critical orbit therefore becomes a set of nodes for one value of `β`, and
//! two orbits appear simultaneously only where two critical values of `φ`
//! coincide. Each such orbit meets the mirror plane `x = 0`, and because the
//! plane is a mirror of `φ`, its critical points there are critical in
//! space. The search runs on that plane: a numerical sweep over `c`,
//! Newton refinement of each crossing, exact recognition in Q(√5), and
//! finally certification of the resulting surface.

use serde::Serialize;

use crate::catalog::{decic_family, invariant_r, DecicParams, SurfaceFamily};
use crate::exactnum::{rational, GoldenNumber, Interval};
use crate::multipoly::{MultiPoly, Var};

use super::{find_singular_points, same_point, SearchSettings, SingularityType};

type P = MultiPoly<GoldenNumber>;
type FP = MultiPoly<f64>;

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub parameter: GoldenNumber,
    pub count: usize,
    pub complete: bool,
    pub all_a1: bool,
    /// Count strictly above the generic (most frequent) count of the scan.
    pub above_generic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub family: String,
    pub parameter_name: String,
    pub generic_count: Option<usize>,
    pub max_count: usize,
    pub entries: Vec<ScanEntry>,
}

/// Certified node counts of `family` over an exact parameter grid.
pub fn family_scan(family: &SurfaceFamily, grid: &[GoldenNumber], settings: &SearchSettings) -> ScanReport {
    let mut entries: Vec<ScanEntry> = grid
        .iter()
        .map(|p| {
            let f = family.form(p);
            let set = find_singular_points(&f, settings).expect("catalog forms are homogeneous");
            ScanEntry {
                parameter: p.clone(),
                count: set.count(),
                complete: set.is_complete(),
                all_a1: set.points.iter().all(|q| q.kind == SingularityType::A1),
                above_generic: false,
            }
        })
        .collect();
    let generic = family.generic_nodes.or_else(|| most_frequent(entries.iter().map(|e| e.count)));
    if let Some(g) = generic {
        for e in &mut entries {
            e.above_generic = e.count > g;
        }
    }
    ScanReport {
        family: family.name.to_string(),
        parameter_name: family.parameter_name.to_string(),
        generic_count: generic,
        max_count: entries.iter().map(|e| e.count).max().unwrap_or(0),
        entries,
    }
}

/// Most frequent value; ties go to the smallest.
fn most_frequent(xs: impl Iterator<Item = usize>) -> Option<usize> {
    let mut counts = std::collections::BTreeMap::new();
    for x in xs {
        *counts.entry(x).or_insert(0usize) += 1;
    }
    let best = counts.values().copied().max()?;
    counts.into_iter().find(|&(_, n)| n == best).map(|(x, _)| x)
}

/// Smallest-height `(p + q√5)/d` within `tol` (relative to `max(1, |x|)`) of
/// `x`, searching `d ≤ max_den` and `|q| ≤ max_q` in order of `d`, then `|q|`.
pub fn recognize_golden(x: f64, max_den: i64, max_q: i64, tol: f64) -> Option<GoldenNumber> {
    let s5 = 5f64.sqrt();
    let scale = x.abs().max(1.0);
    for d in 1..=max_den {
        for aq in 0..=max_q {
            for q in if aq == 0 { vec![0] } else { vec![aq, -aq] } {
                let p = (d as f64 * x - q as f64 * s5).round() as i64;
                let cand = GoldenNumber::new(rational(p, d), rational(q, d));
                if (cand.to_f64() - x).abs() <= tol * scale {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Polynomials on the plane `x = 0`, with `w` standing for `c`.
struct MirrorPolys {
    r: FP,
    d: FP,
    /// `∇φ·D²` in `y`, `z`.
    g: [FP; 2],
    /// `∂g_i/∂(y, z, c)`.
    dg: [[FP; 3]; 2],
    /// `∂D/∂c`.
    d_c: FP,
}

impl MirrorPolys {
    fn new() -> Self {
        let zero = P::zero();
        let on_plane = invariant_r().substitute(&[zero, P::var(Var::Y), P::var(Var::Z), P::var(Var::W)]);
        let r2 = &P::var(Var::Y).pow(2) + &P::var(Var::Z).pow(2);
        let k = &r2 - &P::one();
        let l = &r2 - &P::var(Var::W);
        let d = &(&k * &k) * &(&l * &l);
        let g = [Var::Y, Var::Z].map(|v| &(&on_plane.derivative(v) * &d) - &(&on_plane * &d.derivative(v)));
        let dg = [0, 1].map(|i| [Var::Y, Var::Z, Var::W].map(|v| g[i].derivative(v).to_f64()));
        MirrorPolys {
            r: on_plane.to_f64(),
            d_c: d.derivative(Var::W).to_f64(),
            d: d.to_f64(),
            g: g.map(|p| p.to_f64()),
            dg,
        }
    }

    fn at(y: f64, z: f64, c: f64) -> [f64; 4] {
        [0.0, y, z, c]
    }

    fn phi(&self, y: f64, z: f64, c: f64) -> f64 {
        let p = Self::at(y, z, c);
        self.r.evaluate(&p) / self.d.evaluate(&p)
    }

    fn newton2(&self, start: [f64; 2], c: f64) -> Option<[f64; 2]> {
        let [mut y, mut z] = start;
        for _ in 0..60 {
            let p = Self::at(y, z, c);
            let g = [self.g[0].evaluate(&p), self.g[1].evaluate(&p)];
            let j = [
                [self.dg[0][0].evaluate(&p), self.dg[0][1].evaluate(&p)],
                [self.dg[1][0].evaluate(&p), self.dg[1][1].evaluate(&p)],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            let sy = (j[1][1] * g[0] - j[0][1] * g[1]) / det;
            let sz = (j[0][0] * g[1] - j[1][0] * g[0]) / det;
            y -= sy;
            z -= sz;
            if !(y.is_finite() && z.is_finite()) || y.abs() > 10.0 || z.abs() > 10.0 {
                return None;
            }
            if sy.abs().max(sz.abs()) <= 1e-14 * (1.0 + y.abs().max(z.abs())) {
                return Some([y, z]);
            }
        }
        None
    }
}

/// A critical point of `φ` on the mirror plane, in the quadrant `y, z ≥ 0`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MirrorCritical {
    pub y: f64,
    pub z: f64,
    pub value: f64,
    pub radius: f64,
}

fn mirror_critical(polys: &MirrorPolys, c: f64) -> Vec<MirrorCritical> {
    const SEEDS: usize = 20;
    let mut out: Vec<MirrorCritical> = Vec::new();
    for i in 0..SEEDS {
        for j in 0..SEEDS {
            let start = [2.6 * (i as f64 + 0.5) / SEEDS as f64, 2.6 * (j as f64 + 0.5) / SEEDS as f64];
            let Some([y, z]) = polys.newton2(start, c) else { continue };
            let (y, z) = (y.abs(), z.abs());
            let p = MirrorPolys::at(y, z, c);
            let d = polys.d.evaluate(&p);
            let r = polys.r.evaluate(&p);
            if d.abs() < 1e-8 || r.abs() < 1e-10 {
                continue;
            }
            if out.iter().any(|q| (q.y - y).abs() + (q.z - z).abs() < 1e-7) {
                continue;
            }
            out.push(MirrorCritical {
                y,
                z,
                value: r / d,
                radius: (y * y + z * z).sqrt(),
            });
        }
    }
    out.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    out
}

/// Critical points of `R/(K²L²)` on the plane `x = 0` for a given `c`
/// (floating point; used to locate candidates, not to certify).
pub fn critical_values_on_mirror(c: f64) -> Vec<MirrorCritical> {
    mirror_critical(&MirrorPolys::new(), c)
}

fn solve5(mut a: [[f64; 5]; 5], mut b: [f64; 5]) -> Option<[f64; 5]> {
    for col in 0..5 {
        let piv = (col..5).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col] == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..5 {
            let f = a[row][col] / a[col][col];
            for k in col..5 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 5];
    for row in (0..5).rev() {
        let s: f64 = (row + 1..5).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Newton on `(y₁, z₁, y₂, z₂, c)`: both points critical, equal values.
fn refine_crossing(polys: &MirrorPolys, a: [f64; 2], b: [f64; 2], c: f64) -> Option<([f64; 5], f64)> {
    let mut u = [a[0], a[1], b[0], b[1], c];
    for _ in 0..60 {
        let p1 = MirrorPolys::at(u[0], u[1], u[4]);
        let p2 = MirrorPolys::at(u[2], u[3], u[4]);
        let mut res = [0.0; 5];
        let mut jac = [[0.0; 5]; 5];
        for (k, p) in [p1, p2].iter().enumerate() {
            for i in 0..2 {
                res[2 * k + i] = polys.g[i].evaluate(p);
                jac[2 * k + i][2 * k] = polys.dg[i][0].evaluate(p);
                jac[2 * k + i][2 * k + 1] = polys.dg[i][1].evaluate(p);
                jac[2 * k + i][4] = polys.dg[i][2].evaluate(p);
            }
        }
        // φ₁ − φ₂; ∂φ/∂y = g_y/D² and ∂φ/∂c = −R·D_c/D²
        for (k, p) in [p1, p2].iter().enumerate() {
            let sign = if k == 0 { 1.0 } else { -1.0 };
            let d = polys.d.evaluate(p);
            let r = polys.r.evaluate(p);
            res[4] += sign * r / d;
            jac[4][2 * k] = sign * polys.g[0].evaluate(p) / (d * d);
            jac[4][2 * k + 1] = sign * polys.g[1].evaluate(p) / (d * d);
            jac[4][4] += sign * (-r * polys.d_c.evaluate(p) / (d * d));
        }
        let step = solve5(jac, res)?;
        for i in 0..5 {
            u[i] -= step[i];
        }
        if !u.iter().all(|v| v.is_finite()) {
            return None;
        }
        if step.iter().all(|s| s.abs() <= 1e-14 * (1.0 + u[4].abs())) {
            let beta = polys.phi(u[0], u[1], u[4]);
            return Some((u, beta));
        }
    }
    None
}

/// A parameter pair at which two critical values of `φ` coincide.
#[derive(Clone, Debug, Serialize)]
pub struct Crossing {
    pub c: f64,
    pub beta: f64,
    pub points: [[f64; 2]; 2],
    pub c_exact: Option<GoldenNumber>,
    pub beta_exact: Option<GoldenNumber>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateResult {
    pub crossing: Crossing,
    pub certified_count: Option<usize>,
    pub complete: Option<bool>,
    pub accepted: bool,
}

/// Outcome of the decic parameter search.
#[derive(Clone, Debug, Serialize)]
pub struct DecicDerivation {
    pub c_grid: (f64, f64, usize),
    pub candidates: Vec<CandidateResult>,
    pub chosen: Option<DecicParams>,
    pub certified_count: Option<usize>,
}

fn crossings(polys: &MirrorPolys, c_lo: f64, c_hi: f64, steps: usize) -> Vec<Crossing> {
    let grid: Vec<f64> = (0..=steps).map(|k| c_lo + (c_hi - c_lo) * k as f64 / steps as f64).collect();
    let crit: Vec<Vec<MirrorCritical>> = {
        use rayon::prelude::*;
        grid.par_iter().map(|&c| mirror_critical(polys, c)).collect()
    };
    let mut found: Vec<Crossing> = Vec::new();
    for k in 0..steps {
        let (a, b) = (&crit[k], &crit[k + 1]);
        // continuation: nearest critical point at the next grid value
        let track: Vec<Option<usize>> = a
            .iter()
            .map(|p| {
                b.iter()
                    .enumerate()
                    .map(|(j, q)| (j, (p.y - q.y).hypot(p.z - q.z)))
                    .filter(|&(_, dist)| dist < 0.15)
                    .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                    .map(|(j, _)| j)
            })
            .collect();
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let (Some(ti), Some(tj)) = (track[i], track[j]) else { continue };
                if ti == tj {
                    continue;
                }
                let before = a[i].value - a[j].value;
                let after = b[ti].value - b[tj].value;
                if before.signum() == after.signum() {
                    continue;
                }
                let mid = 0.5 * (grid[k] + grid[k + 1]);
                let Some((u, beta)) = refine_crossing(polys, [a[i].y, a[i].z], [a[j].y, a[j].z], mid) else {
                    continue;
                };
                let c = u[4];
                let distinct = (u[0].abs() - u[2].abs()).abs() + (u[1].abs() - u[3].abs()).abs() > 1e-6;
                if !(distinct && c > grid[k] - 1e-9 && c < grid[k + 1] + 1e-9) {
                    continue;
                }
                if found.iter().any(|f| (f.c - c).abs() < 1e-9 && (f.beta - beta).abs() < 1e-7 * beta.abs().max(1.0)) {
                    continue;
                }
                found.push(Crossing {
                    c,
                    beta,
                    points: [[u[0].abs(), u[1].abs()], [u[2].abs(), u[3].abs()]],
                    c_exact: recognize_golden(c, 64, 64, 1e-11),
                    beta_exact: recognize_golden(beta, 64, 64, 1e-11),
                });
            }
        }
    }
    found.sort_by(|x, y| {
        x.c.partial_cmp(&y.c)
            .unwrap()
            .then(x.beta.partial_cmp(&y.beta).unwrap())
    });
    found
}

/// Searches `c ∈ [c_lo, c_hi]` (in `steps` grid intervals) for coinciding
/// critical values. Crossings are grouped by their exact `c`; going through
/// the groups in increasing `c`, every candidate with exact `β` is
/// certified, and a candidate qualifies when its node set is complete,
/// consists of nodes only, and contains nodes at both coinciding critical
/// points. The qualifying candidate with the most nodes in the first group
/// that has one is chosen.
pub fn derive_decic_parameters(c_lo: f64, c_hi: f64, steps: usize, settings: &SearchSettings) -> DecicDerivation {
    let polys = MirrorPolys::new();
    let mut out = DecicDerivation {
        c_grid: (c_lo, c_hi, steps),
        candidates: Vec::new(),
        chosen: None,
        certified_count: None,
    };
    let mut groups: Vec<Vec<Crossing>> = Vec::new();
    for x in crossings(&polys, c_lo, c_hi, steps) {
        match groups.last_mut() {
            Some(g) if x.c_exact.is_some() && g[0].c_exact == x.c_exact => g.push(x),
            _ => groups.push(vec![x]),
        }
    }
    for group in groups {
        let mut best: Option<(usize, usize)> = None;
        for crossing in group {
            let mut result = CandidateResult {
                crossing,
                certified_count: None,
                complete: None,
                accepted: false,
            };
            if let (None, Some(c), Some(beta)) = (&out.chosen, &result.crossing.c_exact, &result.crossing.beta_exact) {
                let params = DecicParams {
                    beta: beta.clone(),
                    c: c.clone(),
                };
                let set = find_singular_points(&decic_family(&params), settings).expect("homogeneous");
                let nodes_only = set.points.iter().all(|p| p.kind == SingularityType::A1);
                let hits_both = result.crossing.points.iter().all(|[y, z]| {
                    let target = [0.0, *y, *z, 1.0].map(|v| Interval::new(v, v).inflate(1e-6));
                    set.points.iter().any(|p| same_point(&p.homogeneous(), &target))
                });
                result.certified_count = Some(set.count());
                result.complete = Some(set.is_complete());
                if set.is_complete() && nodes_only && hits_both && best.map_or(true, |(_, n)| set.count() > n) {
                    best = Some((out.candidates.len(), set.count()));
                }
            }
            out.candidates.push(result);
        }
        if let Some((i, n)) = best {
            let cand = &mut out.candidates[i];
            cand.accepted = true;
            out.chosen = Some(DecicParams {
                beta: cand.crossing.beta_exact.clone().expect("certified candidates are exact"),
                c: cand.crossing.c_exact.clone().expect("certified candidates are exact"),
            });
            out.certified_count = Some(n);
        }
    }
    out
}

/// The default sweep: `c ∈ [1/10, 1]` in steps of `1/100`.
pub fn default_decic_sweep(settings: &SearchSettings) -> DecicDerivation {
    derive_decic_parameters(0.1, 1.0, 90, settings)
}
