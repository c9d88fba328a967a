//! A ruler-and-compass construction kernel in homogeneous coordinates.
//!
//! [`geom`] holds the primitives, [`transforms`] the inversive, projective
//! and quadratic maps, [`curve`] exact algebraic curves over ℚ(√3),
//! [`construction`] the dependency-graph engine and [`dsl`] the `.geo`
//! language that feeds it. [`verify`] bundles the property suites run by the
//! command-line tool.

pub mod construction;
pub mod corpus;
pub mod curve;
pub mod dsl;
pub mod geom;
pub mod transforms;
pub mod verify;
