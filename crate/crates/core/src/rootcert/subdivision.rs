use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::{Interval, RoundingFloat};

use super::krawczyk::{
    box_intersect, box_subset, centre, certify_near, max_width, newton_certify, tighten,
    Certification, CertifiedBox, IBox, SquareSystem,
};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of bisections along any one axis.
    pub max_depth: u32,
    /// Target radius of the reported root enclosures.
    pub target_radius: f64,
    /// Boxes narrower than this try Newton + ε-inflation from their centre.
    pub inflation_width: f64,
    /// Abort (reporting the remaining boxes as unresolved) past this many.
    pub max_boxes: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_depth: 60,
            target_radius: 1e-10,
            inflation_width: 1.0 / 16.0,
            max_boxes: 50_000_000,
        }
    }
}

/// A certified root with its tightened enclosure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedRoot<F: RoundingFloat> {
    pub certificate: CertifiedBox<F>,
    /// `false` when some guard equation provably does not vanish on the
    /// enclosure: a root of the square system that is not a root of the
    /// guarded one.
    pub guards_hold: bool,
}

impl<F: RoundingFloat> CertifiedRoot<F> {
    pub fn enclosure(&self) -> &IBox<F> {
        &self.certificate.enclosure
    }

    pub fn region(&self) -> &IBox<F> {
        &self.certificate.region
    }

    pub fn midpoint(&self) -> [F; 3] {
        centre(&self.certificate.enclosure)
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport<F: RoundingFloat> {
    /// Roots of the full (guarded) system, sorted by enclosure.
    pub roots: Vec<CertifiedRoot<F>>,
    /// Certified roots of the square system where a guard fails.
    pub discarded: Vec<CertifiedRoot<F>>,
    /// Boxes left undecided at the depth or box limit.
    pub unresolved: Vec<IBox<F>>,
    pub boxes_processed: usize,
    pub generations: usize,
}

impl<F: RoundingFloat> SearchReport<F> {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// Summary of an unresolved box for diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct BoxRecord {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl BoxRecord {
    pub fn new<F: RoundingFloat>(b: &IBox<F>) -> Self {
        BoxRecord {
            lo: b.map(|v| v.lo().to_f64_exact()),
            hi: b.map(|v| v.hi().to_f64_exact()),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Cell<F: RoundingFloat> {
    b: IBox<F>,
    depth: [u32; 3],
}

enum Outcome<F: RoundingFloat> {
    Reject,
    Certified(CertifiedBox<F>),
    Split(Option<CertifiedBox<F>>, IBox<F>),
}

fn process<F: RoundingFloat>(sys: &SquareSystem<F>, cell: &Cell<F>, opts: &SearchOptions) -> Outcome<F> {
    match newton_certify(sys, &cell.b) {
        Certification::Reject => Outcome::Reject,
        Certification::Certified(c) => Outcome::Certified(c),
        Certification::Unknown(contracted) => {
            let w = max_width(&cell.b);
            let mut found = None;
            if w.to_f64_exact() <= opts.inflation_width {
                let radii = [w, w / F::from(4.0).unwrap(), w / F::from(64.0).unwrap(), F::from(1e-9).unwrap()];
                found = certify_near(sys, centre(&cell.b), &radii);
            }
            Outcome::Split(found, contracted.unwrap_or(cell.b))
        }
    }
}

/// Splits along the widest side of the contracted box (kept inside the cell).
fn split<F: RoundingFloat>(cell: &Cell<F>, contracted: &IBox<F>) -> Option<[Cell<F>; 2]> {
    let b = box_intersect(contracted, &cell.b).unwrap_or(cell.b);
    let mut axis = 0;
    for i in 1..3 {
        if b[i].width() > b[axis].width() {
            axis = i;
        }
    }
    let (l, r) = b[axis].bisect();
    if !(l.width() < b[axis].width() && r.width() < b[axis].width()) {
        return None;
    }
    let mut left = Cell { b, depth: cell.depth };
    let mut right = left;
    left.b[axis] = l;
    right.b[axis] = r;
    left.depth[axis] += 1;
    right.depth[axis] += 1;
    Some([left, right])
}

struct RootSet<F: RoundingFloat> {
    roots: Vec<CertifiedRoot<F>>,
}

impl<F: RoundingFloat> RootSet<F> {
    /// Two certificates describe the same root iff one's enclosure lies in
    /// the other's uniqueness region.
    fn insert(&mut self, r: CertifiedRoot<F>) -> bool {
        let dup = self.roots.iter().any(|o| {
            box_subset(&r.certificate.enclosure, &o.certificate.region)
                || box_subset(&o.certificate.enclosure, &r.certificate.region)
        });
        if !dup {
            self.roots.push(r);
        }
        !dup
    }

    fn covers(&self, b: &IBox<F>) -> bool {
        self.roots.iter().any(|r| box_subset(b, &r.certificate.region))
    }
}

/// Complete search for the roots of `sys` in `domain`.
///
/// Every box is either rejected, contained in the uniqueness region of a
/// certified root, or bisected; boxes still undecided at the depth limit are
/// reported in `unresolved`, never dropped. Boxes of one generation are
/// processed in parallel and merged in order, so the result is
/// deterministic.
pub fn subdivide_search<F: RoundingFloat>(
    sys: &SquareSystem<F>,
    domain: &IBox<F>,
    opts: &SearchOptions,
) -> SearchReport<F> {
    let radius = F::from(opts.target_radius).unwrap();
    let mut set = RootSet { roots: Vec::new() };
    let mut queue = vec![Cell { b: *domain, depth: [0; 3] }];
    let mut report = SearchReport {
        roots: Vec::new(),
        discarded: Vec::new(),
        unresolved: Vec::new(),
        boxes_processed: 0,
        generations: 0,
    };

    while !queue.is_empty() {
        report.generations += 1;
        if report.boxes_processed + queue.len() > opts.max_boxes {
            report.unresolved.extend(queue.iter().map(|c| c.b));
            break;
        }
        report.boxes_processed += queue.len();
        let outcomes: Vec<Outcome<F>> = queue.par_iter().map(|c| process(sys, c, opts)).collect();

        let mut next = Vec::new();
        for (cell, outcome) in queue.iter().zip(outcomes) {
            let cert = match &outcome {
                Outcome::Certified(c) => Some(*c),
                Outcome::Split(c, _) => *c,
                Outcome::Reject => None,
            };
            if let Some(c) = cert {
                let t = tighten(sys, &c, radius);
                let guards_hold = !sys.guard_excludes(&t.enclosure);
                set.insert(CertifiedRoot { certificate: t, guards_hold });
            }
            if let Outcome::Split(_, contracted) = outcome {
                if set.covers(&cell.b) {
                    continue;
                }
                if cell.depth.iter().any(|&d| d >= opts.max_depth) {
                    report.unresolved.push(cell.b);
                    continue;
                }
                match split(cell, &contracted) {
                    Some(children) => next.extend(children),
                    None => report.unresolved.push(cell.b),
                }
            }
        }
        next.retain(|c| !set.covers(&c.b));
        queue = next;
    }

    let (mut roots, mut discarded): (Vec<_>, Vec<_>) = set.roots.into_iter().partition(|r| r.guards_hold);
    let key = |r: &CertifiedRoot<F>| r.midpoint().map(|v| v.to_f64_exact());
    roots.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    discarded.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    report.roots = roots;
    report.discarded = discarded;
    report
}

/// The box `[lo, hi]³`.
pub fn cube<F: RoundingFloat>(lo: F, hi: F) -> IBox<F> {
    [Interval::new(lo, hi); 3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::{parse_poly, Var};

    const XYZ: [Var; 3] = [Var::X, Var::Y, Var::Z];

    #[test]
    fn antipodal_pair() {
        let sys = SquareSystem::<f64>::new(
            [
                parse_poly("x^2 + y^2 - 1").unwrap(),
                parse_poly("x - y").unwrap(),
                parse_poly("z").unwrap(),
            ],
            XYZ,
        );
        let rep = subdivide_search(&sys, &cube(-2.0, 2.0), &SearchOptions::default());
        assert!(rep.is_complete());
        assert_eq!(rep.roots.len(), 2);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(rep.roots[0].enclosure()[0].contains(-r));
        assert!(rep.roots[1].enclosure()[0].contains(r));
        for root in &rep.roots {
            assert!(root.enclosure().iter().all(|v| v.rad() <= 1e-10));
        }
    }

    #[test]
    fn empty_region_terminates() {
        let sys = SquareSystem::<f64>::new(
            [
                parse_poly("x^2 + y^2 + z^2 + 1").unwrap(),
                parse_poly("x").unwrap(),
                parse_poly("y").unwrap(),
            ],
            XYZ,
        );
        let rep = subdivide_search(&sys, &cube(-2.0, 2.0), &SearchOptions::default());
        assert!(rep.is_complete());
        assert!(rep.roots.is_empty());
        assert!(rep.generations < 60);
    }

    #[test]
    fn root_on_a_split_plane() {
        // roots at integer points sit on bisection boundaries
        let sys = SquareSystem::<f64>::new(
            [
                parse_poly("x^2 - 1").unwrap(),
                parse_poly("y").unwrap(),
                parse_poly("z*(z-1)").unwrap(),
            ],
            XYZ,
        );
        let rep = subdivide_search(&sys, &cube(-2.0, 2.0), &SearchOptions::default());
        assert!(rep.is_complete());
        assert_eq!(rep.roots.len(), 4);
    }

    #[test]
    fn degenerate_root_is_reported_unresolved() {
        // a double root cannot be certified by a regular-root test
        let sys = SquareSystem::<f64>::new(
            [
                parse_poly("x^2").unwrap(),
                parse_poly("y").unwrap(),
                parse_poly("z").unwrap(),
            ],
            XYZ,
        );
        let opts = SearchOptions {
            max_depth: 20,
            ..SearchOptions::default()
        };
        let rep = subdivide_search(&sys, &cube(-1.0, 1.5), &opts);
        assert!(!rep.is_complete());
        assert!(rep.roots.is_empty());
        assert!(rep.unresolved.iter().any(|b| b.iter().all(|v| v.contains(0.0))));
    }

    #[test]
    fn guarded_system_splits_roots() {
        let f = parse_poly("x^2 - y^2 + z^2 - 2*z").unwrap();
        // ∇f = 0 at (0,0,1) where f = −1: not on the surface
        let sys = SquareSystem::<f64>::singular_system(&f, XYZ);
        let rep = subdivide_search(&sys, &cube(-2.0, 2.0), &SearchOptions::default());
        assert!(rep.roots.is_empty());
        assert!(rep.unresolved.is_empty());
        let g = parse_poly("x^2 - y^2 + z^2").unwrap();
        let sys = SquareSystem::<f64>::singular_system(&g, XYZ);
        let rep = subdivide_search(&sys, &cube(-2.0, 2.0), &SearchOptions::default());
        assert_eq!(rep.roots.len(), 1);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let sys = SquareSystem::<f64>::new(
            [
                parse_poly("x^3 - x - y*z").unwrap(),
                parse_poly("y^2 - 1/4").unwrap(),
                parse_poly("z - x").unwrap(),
            ],
            XYZ,
        );
        let run = |n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| subdivide_search(&sys, &cube(-2.0, 2.0), &SearchOptions::default()))
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a.roots, b.roots);
        assert_eq!(a.boxes_processed, b.boxes_processed);
    }
}
