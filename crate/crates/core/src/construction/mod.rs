//! Construction figures: typed steps over a fixed tool table, toolsets,
//! macros, evaluation with non-existence propagation, dragging with branch
//! continuity and locus tracing.

mod eval;
mod figure;
mod tool;

pub use eval::{
    drag, evaluate, evaluate_with, trace_locus, BranchState, LineValue, Path, Polyline, Sample, Scene, SceneObject,
    Value,
};
pub(crate) use figure::check_step;
pub use figure::{Call, Figure, Macro, ObjectId, Step, Toolset, Violation};
pub use tool::{ObjType, Signature, Slot, ToolId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("malformed figure: {0}")]
    MalformedFigure(String),
    #[error("unknown object '{0}'")]
    UnknownObject(String),
    #[error("name already in use: {0}")]
    NameClash(String),
    #[error("ill-formed macro body: {0}")]
    IllFormedBody(String),
    #[error("'{0}' is not draggable")]
    NotDraggable(String),
    #[error("'{target}' does not depend on '{mover}'")]
    NoDependency { target: String, mover: String },
    #[error("invalid path: {0}")]
    InvalidPath(String),
}
