use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::exactnum::{GoldenNumber, Interval};
use crate::multipoly::{IntervalPoly, MultiPoly, UniPoly, Var};
use crate::rootcert::SturmSequence;

type P = MultiPoly<GoldenNumber>;
type I = Interval<f64>;

const XYZ: [Var; 3] = [Var::X, Var::Y, Var::Z];

/// First intersection of a ray with the surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayHit {
    pub t: f64,
    pub point: [f64; 3],
    /// Unit normal `∝ ∇f`, facing the ray origin; `None` when `|∇f|` is
    /// too small to orient (a hit at or very near a singular point).
    pub normal: Option<[f64; 3]>,
    /// Upper bound on `|f(point)|`.
    pub residual: f64,
    /// The root was located with exact Sturm sequences rather than
    /// interval bisection.
    pub exact_fallback: bool,
}

/// `f` in nested Horner form `Σ_a x^a Σ_b y^b Σ_c z^c·k_abc`, exponents
/// descending at every level.
#[derive(Clone, Debug)]
struct Nested {
    x: Vec<(u32, Vec<(u32, Vec<(u32, I)>)>)>,
}

impl Nested {
    fn new(f: &P) -> Self {
        use std::collections::BTreeMap;
        let mut tree: BTreeMap<u32, BTreeMap<u32, BTreeMap<u32, I>>> = BTreeMap::new();
        for (e, c) in f.terms() {
            tree.entry(e[0] as u32)
                .or_default()
                .entry(e[1] as u32)
                .or_default()
                .insert(e[2] as u32, I::from_golden(c));
        }
        let x = tree
            .into_iter()
            .rev()
            .map(|(a, ys)| (a, ys.into_iter().rev().map(|(b, zs)| (b, zs.into_iter().rev().collect())).collect()))
            .collect();
        Nested { x }
    }

    /// Interval coefficients of `s ↦ f(base + s·dir)`.
    fn along(&self, base: &[f64; 3], dir: &[f64; 3]) -> Vec<I> {
        let lin = [0, 1, 2].map(|i| [I::point(base[i]), I::point(dir[i])]);
        if self.x.is_empty() {
            return vec![I::zero()];
        }
        horner_level(&self.x, lin[0], |ys| {
            horner_level(ys, lin[1], |zs| horner_level(zs, lin[2], |k| vec![*k]))
        })
    }
}

/// `acc ← acc·(l₀ + l₁·s)`.
fn mul_linear(p: &mut Vec<I>, l: [I; 2]) {
    p.push(I::zero());
    for k in (0..p.len()).rev() {
        let lower = if k > 0 { p[k - 1] * l[1] } else { I::zero() };
        p[k] = p[k] * l[0] + lower;
    }
}

fn add_into(acc: &mut Vec<I>, q: &[I]) {
    if acc.len() < q.len() {
        acc.resize(q.len(), I::zero());
    }
    for (a, b) in acc.iter_mut().zip(q) {
        *a = *a + *b;
    }
}

/// Horner in polynomial arithmetic over terms with descending exponents.
fn horner_level<T>(terms: &[(u32, T)], l: [I; 2], child: impl Fn(&T) -> Vec<I>) -> Vec<I> {
    let mut acc = child(&terms[0].1);
    let mut prev = terms[0].0;
    for (e, t) in &terms[1..] {
        for _ in 0..prev - e {
            mul_linear(&mut acc, l);
        }
        add_into(&mut acc, &child(t));
        prev = *e;
    }
    for _ in 0..prev {
        mul_linear(&mut acc, l);
    }
    acc
}

/// Rays from a fixed origin `e` against `f(x, y, z) = 0`.
///
/// A ray `e + t·d` limited to `t ∈ [t₀, t₁]` is re-based at its midpoint
/// `o = e + t_m·d` (rounded), and `s ↦ f(o + s·d)` is expanded with
/// interval coefficients by Horner's scheme in polynomial arithmetic.
/// Re-basing inside the clip ball keeps the coefficients small, so the
/// enclosures stay tight even for degree 10. When interval subdivision
/// cannot decide, the exact polynomial along the same line is isolated by
/// Sturm sequences.
#[derive(Clone, Debug)]
pub struct RayCaster {
    origin: [f64; 3],
    exact: P,
    nested: Nested,
    f: IntervalPoly<f64>,
    grad: [IntervalPoly<f64>; 3],
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn horner(c: &[I], t: I) -> I {
    let mut acc = *c.last().expect("nonempty");
    for k in (0..c.len() - 1).rev() {
        acc = acc * t + c[k];
    }
    acc
}

fn along(base: &[f64; 3], dir: &[f64; 3], s: f64) -> [f64; 3] {
    [0, 1, 2].map(|i| base[i] + s * dir[i])
}

impl RayCaster {
    /// `f` may be homogeneous (it is restricted to `w = 1`) or affine.
    pub fn new(f: &P, origin: &[BigRational; 3]) -> Self {
        let affine = f.set_var_one(Var::W);
        RayCaster {
            origin: origin.each_ref().map(to_f64),
            nested: Nested::new(&affine),
            f: IntervalPoly::new(&affine, XYZ),
            grad: XYZ.map(|v| IntervalPoly::new(&affine.derivative(v), XYZ)),
            exact: affine,
        }
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    /// Enclosures of the coefficients of `s ↦ f(base + s·dir)`.
    pub fn line_coefficients(&self, base: &[f64; 3], dir: &[f64; 3]) -> Vec<I> {
        self.nested.along(base, dir)
    }

    /// The exact polynomial `s ↦ f(base + s·dir)`, reading the doubles as
    /// the binary fractions they hold.
    pub fn exact_line_polynomial(&self, base: &[f64; 3], dir: &[f64; 3]) -> UniPoly<GoldenNumber> {
        let g = |x: f64| GoldenNumber::from_rational(rational(x));
        let o = [g(base[0]), g(base[1]), g(base[2]), GoldenNumber::zero()];
        let d = [g(dir[0]), g(dir[1]), g(dir[2]), GoldenNumber::zero()];
        self.exact.restrict_to_line(&o, &d)
    }

    /// The smallest `t ∈ [t_lo, t_hi)` with `f(e + t·d) = 0`.
    ///
    /// Roots are isolated by subdivision on interval Bernstein
    /// coefficients. A piece has no root when its coefficients share a
    /// strict sign, and exactly one when they have a single strict sign
    /// variation, or when the derivative's coefficients share a strict sign
    /// and the endpoint values have strictly opposite signs. Split points
    /// are moved off places where the sign is undecidable. Pieces that stay
    /// undecided down to `2⁻⁴⁰` of the range go to exact isolation.
    pub fn first_hit(&self, dir: &[f64; 3], t_lo: f64, t_hi: f64) -> Option<RayHit> {
        if !(t_lo < t_hi) || dir.iter().all(|x| *x == 0.0) {
            return None;
        }
        let t_mid = 0.5 * (t_lo + t_hi);
        let base = along(&self.origin, dir, t_mid);
        let (s_lo, s_hi) = (t_lo - t_mid, t_hi - t_mid);
        let c = self.line_coefficients(&base, dir);
        if c.iter().all(|x| x.lo() == 0.0 && x.hi() == 0.0) {
            return None;
        }
        let dc: Vec<I> = (1..c.len()).map(|k| c[k].scale(k as f64)).collect();
        let sign = |s: f64| horner(&c, I::point(s)).strict_sign();
        let min_width = (s_hi - s_lo) * 2f64.powi(-40);
        let mut stack = vec![(s_lo, s_hi)];
        while let Some((a, b)) = stack.pop() {
            let bern = bernstein(&c, a, b);
            let unique_root = match sign_variations(&bern) {
                Some(0) => continue,
                Some(1) => true,
                _ if !dc.is_empty() && sign_variations(&bernstein(&dc, a, b)) == Some(0) => match (sign(a), sign(b)) {
                    (Some(sa), Some(sb)) if sa != sb => true,
                    (Some(_), Some(_)) => continue,
                    _ => false,
                },
                _ => false,
            };
            if unique_root {
                let sa = sign(a).or(bern[0].strict_sign()).expect("sign at a root-bracketing end");
                let (lo, hi) = bracket(&c, a, b, sa);
                let s = self.polish(&base, dir, lo, hi);
                return Some(self.hit(&base, dir, t_mid, s, false));
            }
            if b - a <= min_width {
                return self.exact_first_hit(&base, dir, t_mid, a, s_hi);
            }
            let m = [0.5, 0.4375, 0.5625, 0.375, 0.625]
                .iter()
                .map(|l| a + l * (b - a))
                .find(|&m| sign(m).is_some())
                .unwrap_or(0.5 * (a + b));
            stack.push((m, b));
            stack.push((a, m));
        }
        None
    }

    fn exact_first_hit(&self, base: &[f64; 3], dir: &[f64; 3], t_mid: f64, a: f64, s_hi: f64) -> Option<RayHit> {
        let q = self.exact_line_polynomial(base, dir);
        let seq = SturmSequence::new(&q.square_free()).ok()?;
        let roots = seq.isolate(&rational(a), &rational(s_hi));
        let first = roots.first()?;
        let width = rational((s_hi - a).max(1.0) * 2f64.powi(-60));
        let s = to_f64(&first.refine(&seq, &width).midpoint());
        Some(self.hit(base, dir, t_mid, s, true))
    }

    /// Newton on `f` itself along the ray, kept inside the certified
    /// bracket, to pin the point down to the last bits.
    fn polish(&self, base: &[f64; 3], dir: &[f64; 3], lo: f64, hi: f64) -> f64 {
        let residual = |s: f64| self.f.eval_point(&along(base, dir, s)).mag();
        let mut best = 0.5 * (lo + hi);
        let mut best_r = residual(best);
        let mut s = best;
        for _ in 0..4 {
            let p = along(base, dir, s);
            let g = self.grad.each_ref().map(|q| q.eval_f(&p));
            let slope = g[0] * dir[0] + g[1] * dir[1] + g[2] * dir[2];
            if slope == 0.0 || !slope.is_finite() {
                break;
            }
            s = (s - self.f.eval_f(&p) / slope).clamp(lo, hi);
            let r = residual(s);
            if r < best_r {
                best = s;
                best_r = r;
            }
        }
        best
    }

    fn hit(&self, base: &[f64; 3], dir: &[f64; 3], t_mid: f64, s: f64, exact_fallback: bool) -> RayHit {
        let point = along(base, dir, s);
        let g = self.grad.each_ref().map(|p| p.eval_f(&point));
        let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        let normal = (n > 1e-9 && n.is_finite()).then(|| {
            let sign = if g[0] * dir[0] + g[1] * dir[1] + g[2] * dir[2] > 0.0 { -1.0 } else { 1.0 };
            g.map(|x| sign * x / n)
        });
        RayHit {
            t: t_mid + s,
            point,
            normal,
            residual: self.f.eval_point(&point).mag(),
            exact_fallback,
        }
    }

    /// `f` at a point, in floating point.
    pub fn value(&self, p: &[f64; 3]) -> f64 {
        self.f.eval_f(p)
    }

    /// Angle in radians between the `∇f` normal at `p` and the normal from
    /// central differences with step `h`; `None` near singular points.
    pub fn normal_check(&self, p: &[f64; 3], h: f64) -> Option<f64> {
        let g = self.grad.each_ref().map(|q| q.eval_f(p));
        let fd: [f64; 3] = std::array::from_fn(|i| {
            let mut plus = *p;
            let mut minus = *p;
            plus[i] += h;
            minus[i] -= h;
            (self.f.eval_f(&plus) - self.f.eval_f(&minus)) / (2.0 * h)
        });
        let norm = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let (ng, nf) = (norm(&g), norm(&fd));
        if ng < 1e-6 || nf < 1e-6 {
            return None;
        }
        // half-angle form: accurate for tiny angles
        let diff = [0, 1, 2].map(|i| g[i] / ng - fd[i] / nf);
        Some(2.0 * (0.5 * norm(&diff)).min(1.0).asin())
    }
}

/// Bisect a sign change of the interval polynomial until the sign at the
/// midpoint is undecidable or the bracket is two adjacent doubles.
fn bracket(c: &[I], mut a: f64, mut b: f64, sign_a: i8) -> (f64, f64) {
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return (a, b);
        }
        match horner(c, I::point(m)).strict_sign() {
            Some(s) if s == sign_a => a = m,
            Some(_) => b = m,
            None => return (a, b),
        }
    }
}

/// Bernstein coefficients on `[a, b]` of the polynomial with monomial
/// coefficients `c` (in `t`).
fn bernstein(c: &[I], a: f64, b: f64) -> Vec<I> {
    let n = c.len() - 1;
    // Taylor shift to a, then scale to the unit interval
    let mut s = c.to_vec();
    let ia = I::point(a);
    for i in 0..n {
        for k in (i..n).rev() {
            s[k] = s[k] + ia * s[k + 1];
        }
    }
    let h = I::point(b) - ia;
    let mut hk = I::one();
    for x in s.iter_mut() {
        *x = *x * hk;
        hk = hk * h;
    }
    // b_i = Σ_{k≤i} C(i,k)/C(n,k) s_k
    (0..=n)
        .map(|i| {
            let mut acc = I::zero();
            for (k, sk) in s.iter().enumerate().take(i + 1) {
                acc = acc + *sk * binomial_ratio(i, k, n);
            }
            acc
        })
        .collect()
}

/// Enclosure of `C(i,k)/C(n,k)`.
fn binomial_ratio(i: usize, k: usize, n: usize) -> I {
    let mut r = I::one();
    for j in 0..k {
        r = r * I::point((i - j) as f64);
        r = r.checked_div(&I::point((n - j) as f64)).expect("nonzero");
    }
    r
}

/// Sign variations of the coefficient sequence, or `None` when some
/// coefficient has no strict sign.
fn sign_variations(b: &[I]) -> Option<usize> {
    let mut prev = None;
    let mut var = 0;
    for x in b {
        let s = x.strict_sign()?;
        if prev.is_some_and(|p| p != s) {
            var += 1;
        }
        prev = Some(s);
    }
    Some(var)
}

/// One-off ray query: `f` is built into a [`RayCaster`] at `origin`.
pub fn first_hit(f: &P, origin: &[BigRational; 3], dir: &[f64; 3], t_range: (f64, f64)) -> Option<RayHit> {
    RayCaster::new(f, origin).first_hit(dir, t_range.0, t_range.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn sphere() -> P {
        parse_poly("x^2 + y^2 + z^2 - w^2").unwrap()
    }

    #[test]
    fn unit_sphere_head_on() {
        let hit = first_hit(&sphere(), &[q(0), q(0), q(-3)], &[0.0, 0.0, 1.0], (0.0, 10.0)).unwrap();
        assert!((hit.t - 2.0).abs() < 1e-14);
        let n = hit.normal.unwrap();
        assert!(n[0].abs() < 1e-14 && n[1].abs() < 1e-14 && (n[2] + 1.0).abs() < 1e-14);
        assert!(!hit.exact_fallback);
        assert!(hit.residual < 1e-13);
    }

    #[test]
    fn tangent_ray_falls_back_to_exact_isolation() {
        // x = 1 touches the unit sphere at t = 3
        let hit = first_hit(&sphere(), &[q(1), q(0), q(-3)], &[0.0, 0.0, 1.0], (0.0, 10.0)).unwrap();
        assert!(hit.exact_fallback);
        assert!((hit.t - 3.0).abs() < 1e-12);
    }

    #[test]
    fn misses() {
        let f = sphere();
        let o = [q(0), q(0), q(-3)];
        assert!(first_hit(&f, &o, &[0.0, 0.0, -1.0], (0.0, 10.0)).is_none());
        assert!(first_hit(&f, &o, &[1.0, 0.0, 0.0], (0.0, 10.0)).is_none());
        // range stops short of the sphere
        assert!(first_hit(&f, &o, &[0.0, 0.0, 1.0], (0.0, 1.5)).is_none());
        // starts inside: the far wall
        let hit = first_hit(&f, &o, &[0.0, 0.0, 1.0], (2.5, 10.0)).unwrap();
        assert!((hit.t - 4.0).abs() < 1e-14);
    }

    #[test]
    fn exact_polynomial_matches_enclosures() {
        let f = parse_poly("x^3 - 2*x*y*w + z^2*w - tau*w^3").unwrap();
        let rc = RayCaster::new(&f, &[q(1), q(-2), q(3)]);
        let (o, d) = ([0.5, -1.25, 2.0], [0.3, -0.7, 0.11]);
        let exact = rc.exact_line_polynomial(&o, &d);
        let enclosed = rc.line_coefficients(&o, &d);
        assert_eq!(enclosed.len(), 4);
        for (k, iv) in enclosed.iter().enumerate() {
            let c = exact.coeffs().get(k).map(|c| c.to_f64()).unwrap_or(0.0);
            assert!(iv.contains(c));
        }
    }

    #[test]
    fn sphere_normals_are_exact() {
        let rc = RayCaster::new(&sphere(), &[q(0), q(0), q(-3)]);
        for d in [[0.1, 0.2, 1.0], [-0.25, 0.05, 1.0], [0.0, -0.3, 1.0]] {
            let hit = rc.first_hit(&d, 0.0, 10.0).unwrap();
            assert!(rc.normal_check(&hit.point, 1e-5).unwrap() < 1e-6);
        }
    }

    #[test]
    fn singular_hit_has_no_normal() {
        // straight into the vertex of a cone: a double root at t = 2
        let f = parse_poly("x^2 + y^2 - z^2").unwrap();
        let rc = RayCaster::new(&f, &[q(0), q(0), q(-2)]);
        let hit = rc.first_hit(&[0.0, 0.0, 1.0], 0.0, 10.0).unwrap();
        assert!(hit.exact_fallback);
        assert!((hit.t - 2.0).abs() < 1e-12);
        assert_eq!(hit.normal, None);
        assert_eq!(rc.normal_check(&[0.0, 0.0, 0.0], 1e-5), None);
    }

    #[test]
    fn bernstein_coefficients() {
        // (t − 1)(t − 2)(t − 5) = t³ − 8t² + 17t − 10
        let c = [-10.0, 17.0, -8.0, 1.0].map(I::point);
        let whole = bernstein(&c, 0.0, 4.0);
        assert!(whole[0].contains(-10.0) && whole[3].contains(-6.0));
        assert_eq!(sign_variations(&whole), Some(2));
        assert_eq!(sign_variations(&bernstein(&c, 2.5, 4.0)), Some(0));
        assert_eq!(sign_variations(&bernstein(&c, 0.0, 1.5)), Some(1));
    }

    #[test]
    fn close_roots_are_separated_without_exact_fallback() {
        // (t − 1)(t − 1 − 10⁻⁴)(t − 3)
        let f = parse_poly("(x - w)*(x - w - w/10000)*(x - 3*w)").unwrap();
        let rc = RayCaster::new(&f, &[q(0), q(0), q(0)]);
        let hit = rc.first_hit(&[1.0, 0.0, 0.0], 0.0, 10.0).unwrap();
        assert!(!hit.exact_fallback);
        assert!((hit.t - 1.0).abs() < 1e-12);
        let hit = rc.first_hit(&[1.0, 0.0, 0.0], 1.00005, 10.0).unwrap();
        // |p′| ≈ 2·10⁻⁴ at this root limits the accuracy
        assert!((hit.t - 1.0001).abs() < 1e-10, "{hit:?}");
    }
}
