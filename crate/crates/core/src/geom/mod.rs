//! Numeric projective and metric primitives.
//!
//! Points and lines are homogeneous triples normalized so that the largest
//! component has magnitude one. Incidence and tangency comparisons use
//! [`EPS_INCIDENCE`] on those normalized coordinates.

mod circle;
mod conic;
mod fit;
mod intersect;
mod measure;
mod point;

pub use circle::{Circle, GenCircle};
pub use conic::Conic;
pub use fit::conic_through;
pub use intersect::{intersect, Curve, Intersection};
pub use measure::{angle_between, cross_ratio, tangent_direction, Smooth};
pub use point::{HLine, HPoint};

use thiserror::Error;

/// Coordinate and ratio type used throughout the numeric kernel.
pub type Scalar = f64;

/// Incidence tolerance on normalized homogeneous coordinates.
pub const EPS_INCIDENCE: Scalar = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("objects coincide: infinitely many common points")]
    CoincidentObjects,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("quadruple contains coincident points")]
    DegenerateQuadruple,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("point does not lie on the curve")]
    NotOnCurve,
    #[error("curve is singular at the point")]
    SingularPoint,
    #[error("the line at infinity has no finite direction")]
    LineAtInfinity,
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(Scalar),
    #[error("point at infinity where a finite point is required")]
    PointAtInfinity,
    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
}

pub(crate) fn max_abs3(v: [Scalar; 3]) -> Scalar {
    v[0].abs().max(v[1].abs()).max(v[2].abs())
}

pub(crate) fn cross3(a: [Scalar; 3], b: [Scalar; 3]) -> [Scalar; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot3(a: [Scalar; 3], b: [Scalar; 3]) -> Scalar {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn det3(a: [Scalar; 3], b: [Scalar; 3], c: [Scalar; 3]) -> Scalar {
    dot3(a, cross3(b, c))
}
