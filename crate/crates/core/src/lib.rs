//! Icosahedrally symmetric nodal surfaces: exact construction over Q(√5),
//! certified enumeration of their singular points, and ray-cast images.

pub mod exactnum;
pub mod multipoly;
pub mod icosahedral;
pub mod catalog;
pub mod rootcert;
pub mod singularities;
pub mod render;

pub use exactnum::{GoldenNumber, Interval};
pub use multipoly::{MultiPoly, UniPoly};

/// Polynomials with exact golden-field coefficients.
pub type GoldenPoly = MultiPoly<GoldenNumber>;
/// Univariate polynomials with exact golden-field coefficients.
pub type GoldenUniPoly = UniPoly<GoldenNumber>;
/// Polynomials with rational coefficients.
pub type RationalPoly = MultiPoly<num_rational::BigRational>;
/// Double-precision polynomials (non-certified fast paths).
pub type FloatPoly = MultiPoly<f64>;
/// Outward-rounded double-precision interval.
pub type Interval64 = Interval<f64>;
/// Outward-rounded single-precision interval.
pub type Interval32 = Interval<f32>;
