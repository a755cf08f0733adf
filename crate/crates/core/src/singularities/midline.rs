use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactnum::{GoldenNumber, Interval};
use crate::icosahedral::Vec3;
use crate::multipoly::{MultiPoly, UniPoly, Var};
use crate::rootcert::{isolate_all_roots, IsolatingInterval, RootError, SturmSequence};

type P = MultiPoly<GoldenNumber>;
type U = UniPoly<GoldenNumber>;
type I = Interval<f64>;

/// Position on the projective line `{(u·a : 1)} ∪ {(a : 0)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineRoot {
    Finite(IsolatingInterval),
    Infinity,
}

/// A singular point on a line through the origin.
#[derive(Clone, Debug)]
pub struct LinePoint {
    pub root: LineRoot,
    /// Exact homogeneous coordinates when the parameter lies in Q(√5).
    pub exact: Option<[GoldenNumber; 4]>,
    pub homogeneous: [I; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LineError {
    #[error("the whole line is singular")]
    LineIsSingular,
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Roots of a square-free polynomial that lie in Q(√5), for the shapes
/// that occur on symmetry axes: degree ≤ 2, or even of degree ≤ 4.
fn golden_roots(p: &U) -> Vec<GoldenNumber> {
    let c = p.coeffs();
    match p.degree() {
        Some(1) => vec![-(&c[0] * &c[1].inv().expect("nonzero leading"))],
        Some(2) => quadratic_roots(&c[2], &c[1], &c[0]),
        Some(4) if c[1].is_zero() && c[3].is_zero() => quadratic_roots(&c[4], &c[2], &c[0])
            .into_iter()
            .filter(|s| s.signum() >= 0)
            .filter_map(|s| s.sqrt())
            .flat_map(|r| if r.is_zero() { vec![r] } else { vec![-r.clone(), r] })
            .collect(),
        _ => Vec::new(),
    }
}

fn quadratic_roots(a: &GoldenNumber, b: &GoldenNumber, c: &GoldenNumber) -> Vec<GoldenNumber> {
    let disc = &(b * b) - &(&(a * c) * &GoldenNumber::from_int(4));
    if disc.signum() < 0 {
        return Vec::new();
    }
    let s = match disc.sqrt() {
        Some(s) => s,
        None => return Vec::new(),
    };
    let den = (a * &GoldenNumber::from_int(2)).inv().expect("nonzero leading");
    let r1 = &(&-b - &s) * &den;
    let r2 = &(&-b + &s) * &den;
    if r1 == r2 {
        vec![r1]
    } else {
        vec![r1, r2]
    }
}

fn in_interval(r: &GoldenNumber, iv: &IsolatingInterval) -> bool {
    let lo = GoldenNumber::from_rational(iv.lo.clone());
    let hi = GoldenNumber::from_rational(iv.hi.clone());
    &lo <= r && r < &hi
}

/// All singular points of `F = 0` on the projective line through the origin
/// with direction `a`, by exact elimination: the restrictions of `F` and its
/// four partial derivatives to the line have a common factor whose real
/// roots are isolated by Sturm sequences; the point at infinity is checked
/// by exact evaluation.
pub fn exact_midline_solve(f: &P, a: &Vec3) -> Result<Vec<LinePoint>, LineError> {
    let zero = GoldenNumber::zero();
    let base = [zero.clone(), zero.clone(), zero.clone(), GoldenNumber::one()];
    let dir = [a[0].clone(), a[1].clone(), a[2].clone(), zero.clone()];
    let system: Vec<P> = std::iter::once(f.clone()).chain(Var::ALL.map(|v| f.derivative(v))).collect();

    let mut out = Vec::new();
    let mut g = U::zero();
    for q in &system {
        g = g.gcd(&q.restrict_to_line(&base, &dir));
    }
    if g.is_zero() {
        return Err(LineError::LineIsSingular);
    }
    if g.degree() > Some(0) {
        let sf = g.square_free();
        let seq = SturmSequence::new(&sf)?;
        let exact = golden_roots(&sf);
        let width = BigRational::new(1.into(), num_bigint::BigInt::one() << 60usize);
        for iv in isolate_all_roots(&sf)? {
            let fine = iv.refine(&seq, &width);
            let (lo, hi) = fine.to_f64_bounds();
            let u = I::new(lo, hi);
            let coords = a.clone().map(|x| I::from_golden(&x) * u);
            let exact_u = exact.iter().find(|r| in_interval(r, &iv));
            out.push(LinePoint {
                exact: exact_u.map(|u| [&a[0] * u, &a[1] * u, &a[2] * u, GoldenNumber::one()]),
                root: LineRoot::Finite(iv),
                homogeneous: [coords[0], coords[1], coords[2], I::one()],
            });
        }
    }
    let at_infinity = [a[0].clone(), a[1].clone(), a[2].clone(), zero];
    if system.iter().all(|q| q.evaluate(&at_infinity).is_zero()) {
        let h = a.clone().map(|x| I::from_golden(&x));
        out.push(LinePoint {
            root: LineRoot::Infinity,
            exact: Some(at_infinity),
            homogeneous: [h[0], h[1], h[2], I::zero()],
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{barth_sextic_alpha, sextic_family};
    use crate::icosahedral::{icosahedral_group, mid_lines};
    use crate::multipoly::parse_poly;

    fn v(a: i64, b: i64, c: i64) -> Vec3 {
        [GoldenNumber::from_int(a), GoldenNumber::from_int(b), GoldenNumber::from_int(c)]
    }

    #[test]
    fn generic_sextic_has_three_points_per_mid_line() {
        let f = sextic_family(&GoldenNumber::one());
        let lines = mid_lines(icosahedral_group());
        let mut total = 0;
        for a in &lines {
            let pts = exact_midline_solve(&f, a).unwrap();
            assert_eq!(pts.len(), 3);
            total += pts.len();
            for p in &pts {
                let e = p.exact.as_ref().expect("exact coordinates on mid-lines");
                for q in Var::ALL.map(|v| f.derivative(v)) {
                    assert!(q.evaluate(e).is_zero());
                }
                assert!(f.evaluate(e).is_zero());
            }
        }
        assert_eq!(total, 45);
    }

    #[test]
    fn barth_point_at_infinity_on_z_axis() {
        let f = sextic_family(&barth_sextic_alpha());
        let pts = exact_midline_solve(&f, &v(0, 0, 1)).unwrap();
        assert!(pts.iter().any(|p| p.root == LineRoot::Infinity));
    }

    #[test]
    fn line_missing_the_singular_locus() {
        let f = parse_poly("x^2 + y^2 + z^2 - w^2").unwrap();
        assert!(exact_midline_solve(&f, &v(1, 2, 0)).unwrap().is_empty());
    }

    #[test]
    fn singular_line_is_an_error() {
        let f = parse_poly("x^2 + y^2").unwrap();
        assert_eq!(exact_midline_solve(&f, &v(0, 0, 1)).unwrap_err(), LineError::LineIsSingular);
    }

    #[test]
    fn golden_roots_of_even_quartic() {
        // (u² − τ²)(u² − 4)
        let t2 = &crate::exactnum::tau() * &crate::exactnum::tau();
        let p = &U::new(vec![-t2.clone(), GoldenNumber::zero(), GoldenNumber::one()])
            * &U::new(vec![GoldenNumber::from_int(-4), GoldenNumber::zero(), GoldenNumber::one()]);
        let r = golden_roots(&p);
        assert_eq!(r.len(), 4);
        for x in &r {
            assert!(p.eval(x).is_zero());
        }
    }
}
