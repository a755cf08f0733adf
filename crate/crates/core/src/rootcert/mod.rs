//! Certified real roots: exact Sturm isolation for univariate polynomials
//! over Q(√5), and Krawczyk certification with subdivision for square
//! systems in three variables.

mod krawczyk;
mod sturm;
mod subdivision;

pub use krawczyk::{
    box_intersect, box_subset, centre, certify_near, excludes_zero, invert3, max_width,
    newton_certify, newton_polish, tighten, Certification, CertifiedBox, IBox, SquareSystem,
};
pub use sturm::{
    eval_rational, isolate_all_roots, isolate_roots, root_bound, sturm_count, IsolatingInterval,
    SturmSequence,
};
pub use subdivision::{
    cube, subdivide_search, BoxRecord, CertifiedRoot, SearchOptions, SearchReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("empty range")]
    EmptyRange,
}
