//! Exact arithmetic in Q(√5) and enclosure arithmetic for numeric refinement.

mod dyadic;
mod golden;
mod interval;
mod scalar;

pub use dyadic::{enclose, Dyadic, DyadicInterval};
pub use golden::{rational, sqrt5, tau, GoldenNumber};
pub use interval::Interval;
pub use scalar::{Coefficient, ExactField, Field, RoundingFloat};
pub(crate) use scalar::rational_to_f64_bounds;

pub use crate::multipoly::parse_constant;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
}
