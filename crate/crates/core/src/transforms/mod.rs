//! Point and curve transformations: circular inversion, stereographic and
//! central projection, pole/polar duality, conjugate conics, organic
//! generation of conics and the quadratic inversion in a conic.

mod bh;
mod conjugate;
mod inversion;
mod organic;
mod polar;
mod projection;
mod stereo;

pub use bh::{bh_blowup_limit, bh_invert, bh_line_image, BHConfig, Fundamental};
pub use conjugate::{conjugate_conic, ideal_chord, ideal_common_secant};
pub use inversion::{invert_gencircle, invert_point};
pub use organic::{organic_conic, OrganicConic, Projectivity};
pub use polar::{harmonic_conjugate, polar, pole};
pub use projection::{central_project, PlaneFrame};
pub use stereo::{ns_composition, stereo_lift, stereo_project, Pole, SpherePoint};

use thiserror::Error;

use crate::geom::GeomError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("the center of inversion has no image")]
    CenterInversion,
    #[error("the projection pole has no image")]
    PoleProjection,
    #[error("the projected point coincides with the projection center")]
    DegenerateRay,
    #[error("conic is singular")]
    SingularConic,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("conic has no center")]
    NoCenter,
    #[error("direction is asymptotic for the conic")]
    AsymptoticDirection,
    #[error("line meets the conic in real points")]
    RealSecant,
    #[error("line misses the conjugate conic")]
    NoIntersection,
    #[error("circles are concentric")]
    ConcentricCircles,
    #[error("projectivity is degenerate")]
    DegenerateProjectivity,
    #[error("point is a fundamental point of the map")]
    FundamentalPoint,
    #[error("image is indeterminate: line through the pole lies in the polar")]
    IndeterminateIntersection,
    #[error("approach along a fundamental line")]
    ExceptionalApproach,
    #[error("base points are not real")]
    ComplexBasePoints,
    #[error("the line at infinity is not allowed here")]
    LineAtInfinity,
    #[error(transparent)]
    Geom(#[from] GeomError),
}
