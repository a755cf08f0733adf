//! Polynomials compiled for fast enclosure evaluation on boxes.
//!
//! Exact golden-field coefficients are replaced by tight floating-point
//! enclosures and the polynomial is stored in nested Horner form over three
//! chart variables.

use crate::exactnum::{GoldenNumber, Interval, RoundingFloat};

use super::poly::{MultiPoly, Var};

#[derive(Clone, Debug)]
enum Node<F: RoundingFloat> {
    Const(Interval<F>, F),
    /// Horner in variable `var`: terms in decreasing exponent.
    Var {
        var: usize,
        terms: Vec<(u32, Node<F>)>,
    },
}

impl<F: RoundingFloat> Node<F> {
    fn build(terms: &[([u32; 3], Interval<F>, F)], depth: usize) -> Node<F> {
        if depth == 3 {
            let mut acc = Interval::zero();
            let mut mid = F::zero();
            for (_, c, m) in terms {
                acc = acc + *c;
                mid = mid + *m;
            }
            return Node::Const(acc, mid);
        }
        let mut exps: Vec<u32> = terms.iter().map(|t| t.0[depth]).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps.dedup();
        if exps == [0] {
            return Node::build(terms, depth + 1);
        }
        let children = exps
            .into_iter()
            .map(|e| {
                let sub: Vec<_> = terms.iter().filter(|t| t.0[depth] == e).cloned().collect();
                (e, Node::build(&sub, depth + 1))
            })
            .collect();
        Node::Var {
            var: depth,
            terms: children,
        }
    }

    fn eval(&self, x: &[Interval<F>; 3]) -> Interval<F> {
        match self {
            Node::Const(c, _) => *c,
            Node::Var { var, terms } => {
                let v = x[*var];
                let mut acc = Interval::zero();
                let mut prev = terms[0].0;
                for (i, (e, child)) in terms.iter().enumerate() {
                    if i > 0 {
                        acc = acc * v.powi(prev - e);
                    }
                    acc = acc + child.eval(x);
                    prev = *e;
                }
                if prev > 0 {
                    acc = acc * v.powi(prev);
                }
                acc
            }
        }
    }

    fn eval_mid(&self, x: &[F; 3]) -> F {
        match self {
            Node::Const(_, m) => *m,
            Node::Var { var, terms } => {
                let v = x[*var];
                let mut acc = F::zero();
                let mut prev = terms[0].0;
                for (i, (e, child)) in terms.iter().enumerate() {
                    if i > 0 {
                        acc = acc * v.powi((prev - e) as i32);
                    }
                    acc = acc + child.eval_mid(x);
                    prev = *e;
                }
                if prev > 0 {
                    acc = acc * v.powi(prev as i32);
                }
                acc
            }
        }
    }
}

/// A polynomial in three chart variables ready for interval evaluation.
#[derive(Clone, Debug)]
pub struct IntervalPoly<F: RoundingFloat> {
    root: Node<F>,
    degree: u32,
}

pub type IntervalPoly64 = IntervalPoly<f64>;

impl<F: RoundingFloat> IntervalPoly<F> {
    /// Compile `p`, reading its three chart variables from `vars`. Any other
    /// variable must be absent.
    pub fn new(p: &MultiPoly<GoldenNumber>, vars: [Var; 3]) -> Self {
        let terms: Vec<([u32; 3], Interval<F>, F)> = p
            .terms()
            .map(|(e, c)| {
                for v in Var::ALL {
                    if !vars.contains(&v) {
                        assert_eq!(e[v.index()], 0, "variable {:?} must be eliminated", v);
                    }
                }
                let iv = Interval::<F>::from_golden(c);
                let m = F::from(c.to_f64()).unwrap_or_else(F::nan);
                (vars.map(|v| e[v.index()] as u32), iv, m)
            })
            .collect();
        let root = if terms.is_empty() {
            Node::Const(Interval::zero(), F::zero())
        } else {
            Node::build(&terms, 0)
        };
        IntervalPoly {
            root,
            degree: p.degree(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Enclosure of the range over a box.
    #[inline]
    pub fn eval(&self, x: &[Interval<F>; 3]) -> Interval<F> {
        self.root.eval(x)
    }

    /// Enclosure of the value at a point.
    #[inline]
    pub fn eval_point(&self, x: &[F; 3]) -> Interval<F> {
        self.root.eval(&x.map(Interval::point))
    }

    /// Non-rigorous floating-point value, for Newton iterations.
    #[inline]
    pub fn eval_f(&self, x: &[F; 3]) -> F {
        self.root.eval_mid(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;
    use proptest::prelude::*;

    const XYZ: [Var; 3] = [Var::X, Var::Y, Var::Z];

    #[test]
    fn matches_exact_values() {
        let p = parse_poly("(tau^2x^2-y^2)(tau^2y^2-z^2)(tau^2z^2-x^2) - 3/7*x*y + sqrt5").unwrap();
        let c = IntervalPoly64::new(&p, XYZ);
        let pt = [
            GoldenNumber::from_ratio(1, 3),
            GoldenNumber::from_ratio(-5, 4),
            GoldenNumber::from_int(2),
            GoldenNumber::from_int(1),
        ];
        let exact = p.evaluate(&pt).to_f64();
        let enc = c.eval_point(&[1.0 / 3.0, -1.25, 2.0]);
        // 1/3 is not a double; compare loosely for the point, then exactly for dyadics
        assert!((enc.mid() - exact).abs() < 1e-12);
        let pt2 = [GoldenNumber::from_ratio(3, 4), GoldenNumber::from_ratio(-5, 4), GoldenNumber::from_int(2), GoldenNumber::from_int(1)];
        let (lo, hi) = p.evaluate(&pt2).to_f64_bounds();
        let enc2 = c.eval_point(&[0.75, -1.25, 2.0]);
        assert!(enc2.lo() <= lo && hi <= enc2.hi());
    }

    #[test]
    fn chart_variables_can_include_w() {
        let p = parse_poly("x^2 + y^2 - w^2").unwrap();
        let c = IntervalPoly64::new(&p, [Var::X, Var::Y, Var::W]);
        assert!(c.eval_point(&[1.0, 0.0, 1.0]).contains(0.0));
    }

    proptest! {
        #[test]
        fn box_enclosure_contains_samples(
            lx in -2f64..2.0, ly in -2f64..2.0, lz in -2f64..2.0, w in 0f64..0.5,
            s in proptest::array::uniform3(0f64..1.0),
        ) {
            let p = parse_poly("x^4*y - tau*y^3*z^2 + (1-sqrt5)*x*z + 7*z^6 - 1").unwrap();
            let c = IntervalPoly64::new(&p, XYZ);
            let b = [Interval::new(lx, lx + w), Interval::new(ly, ly + w), Interval::new(lz, lz + w)];
            let pt = [lx + s[0] * w, ly + s[1] * w, lz + s[2] * w];
            let enc = c.eval(&b);
            // sample points are doubles, hence exact rationals
            let exact_pt = [
                GoldenNumber::from_rational(num_rational::BigRational::from_float(pt[0]).unwrap()),
                GoldenNumber::from_rational(num_rational::BigRational::from_float(pt[1]).unwrap()),
                GoldenNumber::from_rational(num_rational::BigRational::from_float(pt[2]).unwrap()),
                GoldenNumber::from_int(1),
            ];
            let (lo, hi) = p.evaluate(&exact_pt).to_f64_bounds();
            prop_assert!(enc.lo() <= lo && hi <= enc.hi());
        }
    }
}
