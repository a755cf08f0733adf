use crate::exactnum::{GoldenNumber, Interval, RoundingFloat};
use crate::multipoly::{IntervalPoly, MultiPoly, Var};

/// An axis-aligned box in three chart variables.
pub type IBox<F> = [Interval<F>; 3];

/// Extra equation that must vanish at the roots of interest, used only for
/// exclusion (and for the final membership check).
#[derive(Clone, Debug)]
struct Guard<F: RoundingFloat> {
    f: IntervalPoly<F>,
    grad: [IntervalPoly<F>; 3],
}

/// A square system `g₀ = g₁ = g₂ = 0` in three chart variables, with its
/// Jacobian, compiled for interval evaluation.
#[derive(Clone, Debug)]
pub struct SquareSystem<F: RoundingFloat> {
    eqs: [IntervalPoly<F>; 3],
    /// Distinct Jacobian entries; `jac_index[i][j]` points into this.
    jac: Vec<IntervalPoly<F>>,
    jac_index: [[usize; 3]; 3],
    guards: Vec<Guard<F>>,
}

impl<F: RoundingFloat> SquareSystem<F> {
    pub fn new(eqs: [MultiPoly<GoldenNumber>; 3], vars: [Var; 3]) -> Self {
        let mut distinct: Vec<MultiPoly<GoldenNumber>> = Vec::new();
        let mut jac_index = [[0usize; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let d = eqs[i].derivative(vars[j]);
                jac_index[i][j] = match distinct.iter().position(|q| *q == d) {
                    Some(k) => k,
                    None => {
                        distinct.push(d);
                        distinct.len() - 1
                    }
                };
            }
        }
        SquareSystem {
            eqs: eqs.map(|e| IntervalPoly::new(&e, vars)),
            jac: distinct.iter().map(|d| IntervalPoly::new(d, vars)).collect(),
            jac_index,
            guards: Vec::new(),
        }
    }

    /// The critical-point system `∇f = 0` of `f` in the chart variables,
    /// guarded by `f = 0`: its certified roots are singular points of `f = 0`.
    pub fn singular_system(f: &MultiPoly<GoldenNumber>, vars: [Var; 3]) -> Self {
        let grad = vars.map(|v| f.derivative(v));
        let mut sys = Self::new(grad, vars);
        sys.add_guard(f, vars);
        sys
    }

    pub fn add_guard(&mut self, f: &MultiPoly<GoldenNumber>, vars: [Var; 3]) {
        self.guards.push(Guard {
            f: IntervalPoly::new(f, vars),
            grad: vars.map(|v| IntervalPoly::new(&f.derivative(v), vars)),
        });
    }

    pub fn eval(&self, x: &IBox<F>) -> [Interval<F>; 3] {
        [self.eqs[0].eval(x), self.eqs[1].eval(x), self.eqs[2].eval(x)]
    }

    pub fn eval_f(&self, x: &[F; 3]) -> [F; 3] {
        [self.eqs[0].eval_f(x), self.eqs[1].eval_f(x), self.eqs[2].eval_f(x)]
    }

    pub fn jacobian(&self, x: &IBox<F>) -> [[Interval<F>; 3]; 3] {
        let vals: Vec<Interval<F>> = self.jac.iter().map(|p| p.eval(x)).collect();
        self.jac_index.map(|row| row.map(|k| vals[k]))
    }

    pub fn jacobian_f(&self, x: &[F; 3]) -> [[F; 3]; 3] {
        let vals: Vec<F> = self.jac.iter().map(|p| p.eval_f(x)).collect();
        self.jac_index.map(|row| row.map(|k| vals[k]))
    }

    /// Guard enclosures on a box.
    pub fn guard_values(&self, x: &IBox<F>) -> Vec<Interval<F>> {
        self.guards.iter().map(|g| g.f.eval(x)).collect()
    }

    /// `true` when some guard provably does not vanish on `x`.
    pub fn guard_excludes(&self, x: &IBox<F>) -> bool {
        let c = centre(x);
        let cb = c.map(Interval::point);
        self.guards.iter().any(|g| {
            let grad = [g.grad[0].eval(x), g.grad[1].eval(x), g.grad[2].eval(x)];
            let natural = g.f.eval(x);
            let mv = mean_value(g.f.eval(&cb), &grad, x, &c);
            excludes_zero(&natural) || excludes_zero(&mv)
        })
    }
}

/// Finite and free of zero. Non-finite enclosures prove nothing.
#[inline]
pub fn excludes_zero<F: RoundingFloat>(x: &Interval<F>) -> bool {
    x.is_finite() && !x.contains_zero()
}

pub fn centre<F: RoundingFloat>(x: &IBox<F>) -> [F; 3] {
    [x[0].mid(), x[1].mid(), x[2].mid()]
}

pub fn max_width<F: RoundingFloat>(x: &IBox<F>) -> F {
    x[0].width().max(x[1].width()).max(x[2].width())
}

pub fn box_subset<F: RoundingFloat>(a: &IBox<F>, b: &IBox<F>) -> bool {
    (0..3).all(|i| a[i].is_subset(&b[i]))
}

pub fn box_intersect<F: RoundingFloat>(a: &IBox<F>, b: &IBox<F>) -> Option<IBox<F>> {
    Some([a[0].intersect(&b[0])?, a[1].intersect(&b[1])?, a[2].intersect(&b[2])?])
}

fn mean_value<F: RoundingFloat>(
    at_centre: Interval<F>,
    grad: &[Interval<F>; 3],
    x: &IBox<F>,
    c: &[F; 3],
) -> Interval<F> {
    let mut acc = at_centre;
    for j in 0..3 {
        acc = acc + grad[j] * (x[j] - Interval::point(c[j]));
    }
    acc
}

/// Floating-point inverse of a 3×3 matrix via the adjugate.
pub fn invert3<F: RoundingFloat>(m: &[[F; 3]; 3]) -> Option<[[F; 3]; 3]> {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    let det = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
    if det == F::zero() || !det.is_finite() {
        return None;
    }
    let out = adj.map(|row| row.map(|v| v / det));
    out.iter().flatten().all(|v| v.is_finite()).then_some(out)
}

/// A certified regular root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedBox<F: RoundingFloat> {
    /// The system has exactly one root in this box.
    pub region: IBox<F>,
    /// A sub-box containing that root.
    pub enclosure: IBox<F>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Certification<F: RoundingFloat> {
    Certified(CertifiedBox<F>),
    /// Provably no root in the box.
    Reject,
    /// Undecided; the contracted box still contains every root of the input.
    Unknown(Option<IBox<F>>),
}

/// Exclusion tests followed by one Krawczyk step.
///
/// With `c` the centre of `x`, `Y ≈ J(c)⁻¹` and
/// `K = c − Y·g(c) + (I − Y·J(x))·(x − c)`: every root in `x` lies in `K`,
/// and `K ⊂ int x` proves a unique root in `x` with `J` regular there.
pub fn newton_certify<F: RoundingFloat>(sys: &SquareSystem<F>, x: &IBox<F>) -> Certification<F> {
    if !x.iter().all(Interval::is_finite) {
        return Certification::Unknown(None);
    }
    let c = centre(x);
    let cb = c.map(Interval::point);
    let g_c = sys.eval(&cb);
    let jac = sys.jacobian(x);

    // natural and mean-value enclosures of each equation
    let g_x = sys.eval(x);
    for i in 0..3 {
        if excludes_zero(&g_x[i]) || excludes_zero(&mean_value(g_c[i], &jac[i], x, &c)) {
            return Certification::Reject;
        }
    }
    if sys.guard_excludes(x) {
        return Certification::Reject;
    }

    let k = match krawczyk_operator(x, &c, &g_c, &jac) {
        Some(k) => k,
        None => return Certification::Unknown(None),
    };
    if (0..3).all(|i| k[i].is_interior_subset(&x[i])) {
        return Certification::Certified(CertifiedBox {
            region: *x,
            enclosure: k,
        });
    }
    match box_intersect(&k, x) {
        None => Certification::Reject,
        Some(kx) => Certification::Unknown(Some(kx)),
    }
}

/// Shrink the enclosure of a certified root by repeated Krawczyk steps until
/// every side has radius at most `radius` or progress stalls.
pub fn tighten<F: RoundingFloat>(
    sys: &SquareSystem<F>,
    cert: &CertifiedBox<F>,
    radius: F,
) -> CertifiedBox<F> {
    let mut cur = cert.enclosure;
    for _ in 0..64 {
        if cur.iter().all(|v| v.rad() <= radius) {
            break;
        }
        let next = match krawczyk_image(sys, &cur).and_then(|k| box_intersect(&k, &cur)) {
            Some(n) => n,
            None => break,
        };
        let shrunk = (0..3).any(|i| next[i].width() < cur[i].width() * F::from(0.9).unwrap());
        cur = next;
        if !shrunk {
            break;
        }
    }
    CertifiedBox {
        region: cert.region,
        enclosure: cur,
    }
}

fn krawczyk_image<F: RoundingFloat>(sys: &SquareSystem<F>, x: &IBox<F>) -> Option<IBox<F>> {
    let c = centre(x);
    let g_c = sys.eval(&c.map(Interval::point));
    krawczyk_operator(x, &c, &g_c, &sys.jacobian(x))
}

fn krawczyk_operator<F: RoundingFloat>(
    x: &IBox<F>,
    c: &[F; 3],
    g_c: &[Interval<F>; 3],
    jac: &[[Interval<F>; 3]; 3],
) -> Option<IBox<F>> {
    let y = invert3(&jac.map(|row| row.map(|v| v.mid())))?;
    let mut k = [Interval::zero(); 3];
    for i in 0..3 {
        let mut acc = Interval::point(c[i]);
        for j in 0..3 {
            acc = acc - g_c[j].scale(y[i][j]);
        }
        for j in 0..3 {
            let mut m = if i == j { Interval::one() } else { Interval::zero() };
            for l in 0..3 {
                m = m - jac[l][j].scale(y[i][l]);
            }
            acc = acc + m * (x[j] - Interval::point(c[j]));
        }
        k[i] = acc;
    }
    k.iter().all(Interval::is_finite).then_some(k)
}

/// Floating-point Newton iteration; `None` unless it converges.
pub fn newton_polish<F: RoundingFloat>(sys: &SquareSystem<F>, start: [F; 3], iters: usize) -> Option<[F; 3]> {
    let mut x = start;
    let tol = F::epsilon() * F::from(64.0).unwrap();
    for _ in 0..iters {
        let g = sys.eval_f(&x);
        let y = invert3(&sys.jacobian_f(&x))?;
        let mut step = [F::zero(); 3];
        for i in 0..3 {
            for j in 0..3 {
                step[i] = step[i] + y[i][j] * g[j];
            }
        }
        let scale = F::one() + x[0].abs().max(x[1].abs()).max(x[2].abs());
        for i in 0..3 {
            x[i] = x[i] - step[i];
        }
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
        if step.iter().all(|s| s.abs() <= tol * scale) {
            return Some(x);
        }
    }
    None
}

/// ε-inflation: polish from `start`, then try to certify boxes of
/// decreasing radius around the polished point.
pub fn certify_near<F: RoundingFloat>(
    sys: &SquareSystem<F>,
    start: [F; 3],
    radii: &[F],
) -> Option<CertifiedBox<F>> {
    let p = newton_polish(sys, start, 40)?;
    for &r in radii {
        let x = p.map(|v| Interval::point(v).inflate(r));
        if let Certification::Certified(c) = newton_certify(sys, &x) {
            return Some(c);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;

    const XYZ: [Var; 3] = [Var::X, Var::Y, Var::Z];

    fn circle_system() -> SquareSystem<f64> {
        SquareSystem::new(
            [
                parse_poly("x^2 + y^2 - 1").unwrap(),
                parse_poly("x - y").unwrap(),
                parse_poly("z").unwrap(),
            ],
            XYZ,
        )
    }

    fn ibox(a: [(f64, f64); 3]) -> IBox<f64> {
        a.map(|(l, h)| Interval::new(l, h))
    }

    #[test]
    fn certifies_symmetric_root() {
        let sys = circle_system();
        let x = ibox([(0.6, 0.8), (0.6, 0.8), (-0.1, 0.1)]);
        match newton_certify(&sys, &x) {
            Certification::Certified(c) => {
                let t = tighten(&sys, &c, 1e-12);
                let r = std::f64::consts::FRAC_1_SQRT_2;
                assert!(t.enclosure[0].contains(r) && t.enclosure[1].contains(r));
                assert!(t.enclosure[2].contains(0.0));
                assert!(t.enclosure.iter().all(|v| v.rad() <= 1e-12));
            }
            other => panic!("expected certification, got {other:?}"),
        }
    }

    #[test]
    fn rejects_far_box() {
        let sys = circle_system();
        assert_eq!(newton_certify(&sys, &ibox([(2.0, 3.0); 3])), Certification::Reject);
    }

    #[test]
    fn inflation_certifies_from_nearby_start() {
        let sys = circle_system();
        let c = certify_near(&sys, [0.9, 0.5, 0.2], &[1e-6, 1e-9]).unwrap();
        assert!(c.enclosure[0].contains(std::f64::consts::FRAC_1_SQRT_2));
    }

    #[test]
    fn guard_rejects_critical_points_off_the_surface() {
        // ∇(x²+y²+z²−1) vanishes only at the origin, where f = −1
        let f = parse_poly("x^2 + y^2 + z^2 - 1").unwrap();
        let sys = SquareSystem::<f64>::singular_system(&f, XYZ);
        assert_eq!(newton_certify(&sys, &ibox([(-0.1, 0.1); 3])), Certification::Reject);
        let plain = SquareSystem::<f64>::new(
            [f.derivative(Var::X), f.derivative(Var::Y), f.derivative(Var::Z)],
            XYZ,
        );
        assert!(matches!(
            newton_certify(&plain, &ibox([(-0.1, 0.1); 3])),
            Certification::Certified(_)
        ));
    }

    #[test]
    fn single_precision_works() {
        let sys = SquareSystem::<f32>::new(
            [
                parse_poly("x^2 + y^2 - 1").unwrap(),
                parse_poly("x - y").unwrap(),
                parse_poly("z").unwrap(),
            ],
            XYZ,
        );
        let x = [Interval::new(0.6f32, 0.8), Interval::new(0.6, 0.8), Interval::new(-0.1, 0.1)];
        assert!(matches!(newton_certify(&sys, &x), Certification::Certified(_)));
    }

    #[test]
    fn inverse_round_trip() {
        let m = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let y = invert3(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| m[i][k] * y[k][j]).sum();
                assert!((s - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        assert!(invert3(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]]).is_none());
    }
}
