//! Exact algebraic plane curves over ℚ(√3) and their transforms under the
//! quadratic inversion.

mod degree_law;
mod linalg;
mod plane_curve;
mod poly;
mod q3;
mod quadmap;

pub use degree_law::{degree_law_grid, monomials, random_curve_with_multiplicities, DegreeLawCase};
pub use linalg::nullspace;
pub use plane_curve::{
    classify_singularity, curve_eval_residual, multiplicity_at, ExactPoint, PlaneCurve, Singularity,
};
pub use poly::{Monomial, Poly};
pub use q3::Q3;
pub use quadmap::{strict_transform, total_transform, ExceptionalFactor, QuadraticMap, StrictTransform};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("zero polynomial is not a curve")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("expected a double point, found multiplicity {0}")]
    WrongMultiplicity(u32),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("curve vanishes on the image of the map")]
    ZeroPullback,
    #[error("curve contains a fundamental line")]
    FundamentalComponent,
    #[error("exceptional exponent {found} differs from multiplicity {expected}")]
    MultiplicityMismatch { expected: u32, found: u32 },
    #[error("inexact configuration: {0}")]
    InexactInput(&'static str),
}
