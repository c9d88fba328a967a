//! Front end for the construction kernel: text reports, CSV/SVG export and
//! the JSON session protocol spoken by `geo serve`.

pub mod export;
pub mod report;
pub mod serve;
pub mod wire;

use geokernel::construction::{evaluate_with, trace_locus, BranchState, EngineError, Figure, Path, Polyline};

/// Traces `target` while `mover` sweeps the object named `path`, starting
/// from the drag state `state`.
pub fn trace_by_id(
    fig: &Figure,
    state: &BranchState,
    mover: &str,
    path: &str,
    target: &str,
    n: usize,
) -> Result<Polyline, EngineError> {
    let (scene, _) = evaluate_with(fig, state)?;
    let obj = scene.get(path).ok_or_else(|| EngineError::UnknownObject(path.into()))?;
    let value = obj
        .value
        .as_ref()
        .ok_or_else(|| EngineError::InvalidPath(format!("'{path}' does not exist")))?;
    let sweep = Path::from_value(value)
        .ok_or_else(|| EngineError::InvalidPath(format!("'{path}' is a {}, not a circle or line", obj.ty)))?;
    trace_locus(fig, state, mover, &sweep, target, n)
}
