//! Sparse polynomials in `x, y, z, w` over Q(√5), their univariate
//! restrictions, a text grammar, and compiled enclosure evaluation.

mod compiled;
mod parse;
mod poly;
mod univariate;

pub use compiled::{IntervalPoly, IntervalPoly64};
pub use parse::{parse_constant, parse_poly, ParseError};
pub use poly::{Exponent, MultiPoly, Var};
pub use univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("target degree {target} is below the polynomial degree {degree}")]
    DegreeTooSmall { target: u32, degree: u32 },
    #[error("polynomial already involves w")]
    UsesW,
}
