use num_traits::{One, Zero};

use crate::exactnum::{GoldenNumber, Interval};
use crate::icosahedral::cross;
use crate::multipoly::{IntervalPoly, MultiPoly};
use crate::rootcert::IBox;

use super::{Chart, SingularityType};

type P = MultiPoly<GoldenNumber>;
type I = Interval<f64>;

/// Where a singular point is known: a certified box or exact coordinates,
/// both in chart coordinates.
#[derive(Clone, Copy, Debug)]
pub enum PointLocation<'a> {
    Enclosure(&'a IBox<f64>),
    Exact(&'a [GoldenNumber; 3]),
}

/// Interval enclosure of the determinant of the chart Hessian over a box.
pub fn hessian_determinant(f_chart: &P, chart: Chart, b: &IBox<f64>) -> I {
    let vars = chart.vars();
    let h: [[I; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let d = f_chart.derivative(vars[i]).derivative(vars[j]);
            IntervalPoly::<f64>::new(&d, vars).eval(b)
        })
    });
    det3(&h)
}

fn det3<T>(m: &[[T; 3]; 3]) -> T
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<Output = T>,
{
    let c = |a: usize, b: usize, x: usize, y: usize| {
        m[a][x].clone() * m[b][y].clone() - m[a][y].clone() * m[b][x].clone()
    };
    m[0][0].clone() * c(1, 2, 1, 2) - m[0][1].clone() * c(1, 2, 0, 2) + m[0][2].clone() * c(1, 2, 0, 1)
}

/// Classify a singular point of the chart polynomial `f_chart`.
///
/// A1 when the Hessian is nonsingular. With exact coordinates the rank is
/// computed exactly: for corank 1 with kernel `v`, A2 when the third
/// directional derivative `D³f(v,v,v)` does not vanish. A box whose
/// Hessian determinant cannot be separated from zero is reported as
/// degenerate of unknown corank; exact coordinates are needed to go further.
pub fn classify(f_chart: &P, chart: Chart, at: PointLocation<'_>) -> SingularityType {
    match at {
        PointLocation::Enclosure(b) => {
            let det = hessian_determinant(f_chart, chart, b);
            if det.is_finite() && !det.contains_zero() {
                SingularityType::A1
            } else {
                SingularityType::Degenerate { corank: None }
            }
        }
        PointLocation::Exact(p) => classify_exact(f_chart, chart, p),
    }
}

fn classify_exact(f_chart: &P, chart: Chart, p: &[GoldenNumber; 3]) -> SingularityType {
    let vars = chart.vars();
    let pt = chart.homogeneous(p, GoldenNumber::one());
    let h: [[GoldenNumber; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| f_chart.derivative(vars[i]).derivative(vars[j]).evaluate(&pt))
    });
    if !det3(&h).is_zero() {
        return SingularityType::A1;
    }
    // rank 2: the kernel is spanned by the cross product of two independent rows
    let kernel = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| cross(&h[a], &h[b]))
        .find(|v| v.iter().any(|x| !x.is_zero()));
    let v = match kernel {
        Some(v) => v,
        None => {
            let zero = h.iter().flatten().all(|x| x.is_zero());
            return SingularityType::Degenerate {
                corank: Some(if zero { 3 } else { 2 }),
            };
        }
    };
    let mut dir = [GoldenNumber::zero(), GoldenNumber::zero(), GoldenNumber::zero(), GoldenNumber::zero()];
    for (k, var) in vars.iter().enumerate() {
        dir[var.index()] = v[k].clone();
    }
    let line = f_chart.restrict_to_line(&pt, &dir);
    let cubic = line.coeffs().get(3).cloned().unwrap_or_else(GoldenNumber::zero);
    if cubic.is_zero() {
        SingularityType::Degenerate { corank: Some(1) }
    } else {
        SingularityType::A2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;

    fn origin() -> [GoldenNumber; 3] {
        [GoldenNumber::zero(), GoldenNumber::zero(), GoldenNumber::zero()]
    }

    #[test]
    fn node_normal_form() {
        let f = Chart::W.restrict(&parse_poly("x*y*w - z^2*w + x^3").unwrap());
        assert_eq!(classify(&f, Chart::W, PointLocation::Exact(&origin())), SingularityType::A1);
        let b = [I::new(-1e-9, 1e-9); 3];
        assert_eq!(classify(&f, Chart::W, PointLocation::Enclosure(&b)), SingularityType::A1);
    }

    #[test]
    fn cusp_normal_form() {
        let f = Chart::W.restrict(&parse_poly("x*y*w - z^3").unwrap());
        assert_eq!(classify(&f, Chart::W, PointLocation::Exact(&origin())), SingularityType::A2);
        let b = [I::new(-1e-9, 1e-9); 3];
        assert_eq!(
            classify(&f, Chart::W, PointLocation::Enclosure(&b)),
            SingularityType::Degenerate { corank: None }
        );
    }

    #[test]
    fn worse_than_cusp() {
        let f = Chart::W.restrict(&parse_poly("x*y*w^2 - z^4").unwrap());
        assert_eq!(
            classify(&f, Chart::W, PointLocation::Exact(&origin())),
            SingularityType::Degenerate { corank: Some(1) }
        );
        let g = Chart::W.restrict(&parse_poly("x^3 + y^3 + z^3").unwrap());
        assert_eq!(
            classify(&g, Chart::W, PointLocation::Exact(&origin())),
            SingularityType::Degenerate { corank: Some(3) }
        );
    }
}
