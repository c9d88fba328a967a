use std::collections::BTreeMap;

use indexmap::IndexMap;

use super::figure::{Flat, FlatStep};
use super::{EngineError, Figure, ObjType, ObjectId, ToolId};
use crate::geom::{conic_through, intersect, Circle, Conic, Curve, HLine, HPoint, Scalar, EPS_INCIDENCE};
use crate::transforms::{bh_invert, harmonic_conjugate, ideal_common_secant, invert_point, polar, BHConfig};

/// A line-like object. `frame` holds two points `p`, `q` giving the affine
/// parametrization `p + t (q − p)`; it is absent only for the line at
/// infinity. Segments admit `t ∈ [0, 1]`, rays `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineValue {
    pub line: HLine,
    pub kind: ObjType,
    pub frame: Option<[[Scalar; 2]; 2]>,
}

impl LineValue {
    fn through(p: &HPoint, q: &HPoint, kind: ObjType) -> Result<Self, String> {
        if p.coincides(q) {
            return Err("defining points coincide".into());
        }
        let line = p.join(q);
        let frame = match (p.affine(), q.affine()) {
            (Some(a), Some(b)) => Some([a, b]),
            _ if kind != ObjType::Line => return Err("endpoint at infinity".into()),
            (Some(a), None) => {
                let [dx, dy, _] = q.coords();
                let n = dx.hypot(dy);
                Some([a, [a[0] + dx / n, a[1] + dy / n]])
            }
            (None, Some(b)) => {
                let [dx, dy, _] = p.coords();
                let n = dx.hypot(dy);
                Some([[b[0] - dx / n, b[1] - dy / n], b])
            }
            (None, None) => None,
        };
        Ok(Self { line, kind, frame })
    }

    /// A full line with its canonical frame from the foot of the origin.
    pub fn from_line(line: HLine) -> Self {
        let frame = match (line.foot_from_origin(), line.direction()) {
            (Some(f), Some(d)) => Some([f, [f[0] + d[0], f[1] + d[1]]]),
            _ => None,
        };
        Self {
            line,
            kind: ObjType::Line,
            frame,
        }
    }

    /// Full line through `p` with unit direction `d`.
    fn anchored(line: HLine, p: &HPoint, d: [Scalar; 2]) -> Self {
        match p.affine() {
            Some(a) => Self {
                line,
                kind: ObjType::Line,
                frame: Some([a, [a[0] + d[0], a[1] + d[1]]]),
            },
            None => Self::from_line(line),
        }
    }

    fn unit_direction(&self) -> Option<[Scalar; 2]> {
        let [p, q] = self.frame?;
        let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
        let n = dx.hypot(dy);
        Some([dx / n, dy / n])
    }

    /// Frame parameter of a finite point on the line.
    pub fn param_of(&self, x: [Scalar; 2]) -> Option<Scalar> {
        let [p, q] = self.frame?;
        let d = [q[0] - p[0], q[1] - p[1]];
        Some(((x[0] - p[0]) * d[0] + (x[1] - p[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1]))
    }

    pub fn point_at(&self, t: Scalar) -> Option<[Scalar; 2]> {
        let [p, q] = self.frame?;
        Some([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])])
    }

    /// Whether the point with parameter `t` belongs to the segment or ray.
    pub fn admits(&self, t: Scalar) -> bool {
        let eps = 1e-9;
        match self.kind {
            ObjType::Segment => t >= -eps && t <= 1.0 + eps,
            ObjType::Ray => t >= -eps,
            _ => true,
        }
    }

    fn admits_point(&self, p: &HPoint) -> bool {
        match (self.kind, p.affine()) {
            (ObjType::Line, _) => true,
            (_, None) => false,
            (_, Some(x)) => self.param_of(x).is_some_and(|t| self.admits(t)),
        }
    }

    fn clamp(&self, t: Scalar) -> Scalar {
        match self.kind {
            ObjType::Segment => t.clamp(0.0, 1.0),
            ObjType::Ray => t.max(0.0),
            _ => t,
        }
    }
}

/// One sample of a traced locus; `point` is `None` where the target does
/// not exist or lies at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: Scalar,
    pub point: Option<[Scalar; 2]>,
}

/// Samples of a locus in path order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polyline {
    pub samples: Vec<Sample>,
    /// The path was a closed curve.
    pub closed: bool,
}

impl Polyline {
    /// Maximal runs of existing samples. On a closed path a run wrapping
    /// past the start is joined up.
    pub fn runs(&self) -> Vec<Vec<[Scalar; 2]>> {
        let mut out: Vec<Vec<[Scalar; 2]>> = Vec::new();
        let mut cur = Vec::new();
        for s in &self.samples {
            match s.point {
                Some(p) => cur.push(p),
                None if !cur.is_empty() => out.push(std::mem::take(&mut cur)),
                None => {}
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        if self.closed && !self.samples.is_empty() {
            let first = self.samples[0].point.is_some();
            let last = self.samples[self.samples.len() - 1].point.is_some();
            if first && last {
                if out.len() == 1 {
                    let p = out[0][0];
                    out[0].push(p);
                } else if out.len() > 1 {
                    let head = out.remove(0);
                    out.last_mut().expect("two runs").extend(head);
                }
            }
        }
        out
    }

    pub fn points(&self) -> impl Iterator<Item = [Scalar; 2]> + '_ {
        self.samples.iter().filter_map(|s| s.point)
    }
}

/// Evaluated value of an object.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Point(HPoint),
    Line(LineValue),
    Circle(Circle),
    Conic(Conic),
    Scalar(Scalar),
    Polygon(Vec<HPoint>),
    Locus(Polyline),
}

impl Value {
    pub fn as_point(&self) -> Option<&HPoint> {
        match self {
            Value::Point(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_line(&self) -> Option<&LineValue> {
        match self {
            Value::Line(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_circle(&self) -> Option<&Circle> {
        match self {
            Value::Circle(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_conic(&self) -> Option<Conic> {
        match self {
            Value::Conic(c) => Some(*c),
            Value::Circle(c) => Some(c.to_conic()),
            _ => None,
        }
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        match self {
            Value::Scalar(s) => Some(*s),
            _ => None,
        }
    }

    pub fn as_locus(&self) -> Option<&Polyline> {
        match self {
            Value::Locus(l) => Some(l),
            _ => None,
        }
    }

    fn as_curve(&self) -> Option<Curve> {
        match self {
            Value::Line(l) => Some(Curve::Line(l.line)),
            Value::Circle(c) => Some(Curve::Circle(*c)),
            Value::Conic(c) => Some(Curve::Conic(*c)),
            _ => None,
        }
    }
}

/// An evaluated object. Non-existent objects carry the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub id: ObjectId,
    pub ty: ObjType,
    pub value: Option<Value>,
    pub draggable: bool,
    pub reason: Option<String>,
}

impl SceneObject {
    pub fn exists(&self) -> bool {
        self.value.is_some()
    }
}

/// Evaluated top-level objects in definition order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub objects: IndexMap<ObjectId, SceneObject>,
}

impl Scene {
    pub fn get(&self, id: &str) -> Option<&SceneObject> {
        self.objects.get(id)
    }

    pub fn value(&self, id: &str) -> Option<&Value> {
        self.objects.get(id)?.value.as_ref()
    }

    /// Affine coordinates of an existing finite point.
    pub fn point(&self, id: &str) -> Option<[Scalar; 2]> {
        self.value(id)?.as_point()?.affine()
    }

    pub fn scalar(&self, id: &str) -> Option<Scalar> {
        self.value(id)?.as_scalar()
    }

    pub fn all_exist(&self) -> bool {
        self.objects.values().all(SceneObject::exists)
    }
}

/// Kernel-side drag state: the last witness of every multi-valued step and
/// the dragged free parameters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BranchState {
    pub witnesses: BTreeMap<ObjectId, [Scalar; 2]>,
    pub params: BTreeMap<ObjectId, Vec<Scalar>>,
}

impl BranchState {
    pub fn clear(&mut self) {
        self.witnesses.clear();
        self.params.clear();
    }
}

/// A sweep path for locus tracing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Path {
    /// Swept by angle over `[0, 2π)`.
    Circle(Circle),
    /// Swept by affine parameter over `[0, 1]`.
    Segment([Scalar; 2], [Scalar; 2]),
}

impl Path {
    /// Circles sweep themselves; line-like objects sweep between their two
    /// frame points.
    pub fn from_value(v: &Value) -> Option<Self> {
        match v {
            Value::Circle(c) => Some(Path::Circle(*c)),
            Value::Line(l) => l.frame.map(|[p, q]| Path::Segment(p, q)),
            _ => None,
        }
    }

    fn samples(&self, n: usize) -> Vec<(Scalar, [Scalar; 2])> {
        match self {
            Path::Circle(c) => (0..n)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as Scalar / n as Scalar;
                    (t, c.point_at(t).xy())
                })
                .collect(),
            Path::Segment(p, q) => (0..n)
                .map(|k| {
                    let t = k as Scalar / (n - 1) as Scalar;
                    (t, [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])])
                })
                .collect(),
        }
    }

    fn is_closed(&self) -> bool {
        matches!(self, Path::Circle(_))
    }
}

pub(crate) struct Frame {
    pub values: Vec<Option<Value>>,
    pub reasons: Vec<Option<String>>,
    pub witnesses: BTreeMap<ObjectId, [Scalar; 2]>,
}

impl Frame {
    fn scene(&self, fig: &Figure, flat: &Flat) -> Scene {
        let mut objects = IndexMap::new();
        for id in fig.object_ids() {
            let k = flat.index[id];
            let s = &flat.steps[k];
            objects.insert(
                id.to_string(),
                SceneObject {
                    id: id.to_string(),
                    ty: s.ty,
                    value: self.values[k].clone(),
                    draggable: s.top_level && s.tool.is_draggable() && s.id == id,
                    reason: self.reasons[k].clone(),
                },
            );
        }
        Scene { objects }
    }
}

/// Evaluates every step in order, using each step's own branch selector.
pub fn evaluate(fig: &Figure) -> Result<Scene, EngineError> {
    evaluate_with(fig, &BranchState::default()).map(|(s, _)| s)
}

/// Evaluates under a drag state, returning the scene and the state with
/// refreshed witnesses.
pub fn evaluate_with(fig: &Figure, state: &BranchState) -> Result<(Scene, BranchState), EngineError> {
    let flat = fig.flatten()?;
    let frame = eval_flat(&flat, &state.params, &state.witnesses, None, true);
    let next = BranchState {
        witnesses: frame.witnesses.clone(),
        params: state.params.clone(),
    };
    Ok((frame.scene(fig, &flat), next))
}

/// Moves a free point (or a point on a curve, projected onto it) to
/// `target` and re-evaluates with branch continuity.
pub fn drag(
    fig: &Figure,
    state: &BranchState,
    point: &str,
    target: [Scalar; 2],
) -> Result<(Scene, BranchState), EngineError> {
    let flat = fig.flatten()?;
    let k = *flat
        .index
        .get(point)
        .ok_or_else(|| EngineError::UnknownObject(point.into()))?;
    let base = eval_flat(&flat, &state.params, &state.witnesses, Some(&cone(&flat, k)), false);
    let params = drag_params(&flat, &base, k, target)?;
    let mut overrides = state.params.clone();
    overrides.insert(point.to_string(), params);
    let frame = eval_flat(&flat, &overrides, &state.witnesses, None, true);
    let next = BranchState {
        witnesses: frame.witnesses.clone(),
        params: overrides,
    };
    Ok((frame.scene(fig, &flat), next))
}

/// Sweeps `mover` along `path` in `n` uniform steps, recording `target`
/// after each branch-continuous drag frame.
pub fn trace_locus(
    fig: &Figure,
    state: &BranchState,
    mover: &str,
    path: &Path,
    target: &str,
    n: usize,
) -> Result<Polyline, EngineError> {
    let flat = fig.flatten()?;
    let get = |id: &str| {
        flat.index
            .get(id)
            .copied()
            .ok_or_else(|| EngineError::UnknownObject(id.into()))
    };
    let (m, t) = (get(mover)?, get(target)?);
    trace_flat(&flat, &state.params, &state.witnesses, m, path, t, n)
}

fn trace_flat(
    flat: &Flat,
    params: &BTreeMap<ObjectId, Vec<Scalar>>,
    witnesses: &BTreeMap<ObjectId, [Scalar; 2]>,
    m: usize,
    path: &Path,
    t: usize,
    n: usize,
) -> Result<Polyline, EngineError> {
    let ms = &flat.steps[m];
    if !(ms.top_level && ms.tool.is_draggable()) {
        return Err(EngineError::NotDraggable(ms.id.clone()));
    }
    if n < 2 {
        return Err(EngineError::InvalidPath("at least two samples are needed".into()));
    }
    let mask = cone(flat, t);
    if !mask[m] || t == m {
        return Err(EngineError::NoDependency {
            target: flat.steps[t].id.clone(),
            mover: ms.id.clone(),
        });
    }
    let base = eval_flat(flat, params, witnesses, Some(&cone(flat, m)), false);
    let mut overrides = params.clone();
    let mut wit = witnesses.clone();
    let mut samples = Vec::with_capacity(n);
    for (s, x) in path.samples(n) {
        let p = drag_params(flat, &base, m, x)?;
        overrides.insert(ms.id.clone(), p);
        let frame = eval_flat(flat, &overrides, &wit, Some(&mask), false);
        let point = frame.values[t]
            .as_ref()
            .and_then(Value::as_point)
            .and_then(HPoint::affine);
        samples.push(Sample { t: s, point });
        wit = frame.witnesses;
    }
    Ok(Polyline {
        samples,
        closed: path.is_closed(),
    })
}

/// Steps that `k` depends on, including itself.
fn cone(flat: &Flat, k: usize) -> Vec<bool> {
    let mut mask = vec![false; flat.steps.len()];
    let mut stack = vec![k];
    while let Some(i) = stack.pop() {
        if !mask[i] {
            mask[i] = true;
            stack.extend(&flat.steps[i].inputs);
        }
    }
    mask
}

fn drag_params(flat: &Flat, base: &Frame, k: usize, target: [Scalar; 2]) -> Result<Vec<Scalar>, EngineError> {
    let s = &flat.steps[k];
    if !s.top_level {
        return Err(EngineError::NotDraggable(s.id.clone()));
    }
    match s.tool {
        ToolId::FreePoint => Ok(target.to_vec()),
        ToolId::PointOn => {
            let t = match base.values[s.inputs[0]].as_ref() {
                Some(Value::Line(l)) => l.param_of(target).map(|t| l.clamp(t)),
                Some(Value::Circle(c)) => Some(c.angle_of(target)),
                _ => None,
            };
            t.map(|t| vec![t])
                .ok_or_else(|| EngineError::NotDraggable(format!("{}: its curve is missing", s.id)))
        }
        _ => Err(EngineError::NotDraggable(s.id.clone())),
    }
}

pub(crate) fn eval_flat(
    flat: &Flat,
    params: &BTreeMap<ObjectId, Vec<Scalar>>,
    prev: &BTreeMap<ObjectId, [Scalar; 2]>,
    mask: Option<&[bool]>,
    with_loci: bool,
) -> Frame {
    let n = flat.steps.len();
    let mut frame = Frame {
        values: vec![None; n],
        reasons: vec![None; n],
        witnesses: prev.clone(),
    };
    for (k, s) in flat.steps.iter().enumerate() {
        if mask.is_some_and(|m| !m[k]) {
            continue;
        }
        if s.tool == ToolId::Locus && !with_loci {
            frame.reasons[k] = Some("not evaluated".into());
            continue;
        }
        let missing = s.inputs.iter().find(|&&i| frame.values[i].is_none());
        if let Some(&i) = missing {
            frame.reasons[k] = Some(format!("depends on missing '{}'", flat.steps[i].id));
            continue;
        }
        let inputs: Vec<&Value> = s
            .inputs
            .iter()
            .map(|&i| frame.values[i].as_ref().expect("checked"))
            .collect();
        let own = params.get(&s.id).unwrap_or(&s.params);
        let result = if s.tool == ToolId::Locus {
            eval_locus(flat, params, &frame, s, own)
        } else {
            eval_tool(s, &inputs, own, prev.get(&s.id).copied())
        };
        match result {
            Ok(v) => {
                if s.tool == ToolId::Intersect {
                    if let Some(x) = v.as_point().and_then(HPoint::affine) {
                        frame.witnesses.insert(s.id.clone(), x);
                    }
                }
                frame.values[k] = Some(v);
            }
            Err(r) => frame.reasons[k] = Some(r),
        }
    }
    frame
}

fn eval_locus(
    flat: &Flat,
    params: &BTreeMap<ObjectId, Vec<Scalar>>,
    frame: &Frame,
    s: &FlatStep,
    own: &[Scalar],
) -> Result<Value, String> {
    let path =
        Path::from_value(frame.values[s.inputs[2]].as_ref().expect("checked")).ok_or("path has no parametrization")?;
    let n = own[0];
    if !(2.0..=1e6).contains(&n) || n.fract() != 0.0 {
        return Err(format!("sample count {n} is not an integer in [2, 10^6]"));
    }
    trace_flat(
        flat,
        params,
        &frame.witnesses,
        s.inputs[1],
        &path,
        s.inputs[0],
        n as usize,
    )
    .map(Value::Locus)
    .map_err(|e| e.to_string())
}

fn finite(p: &HPoint) -> Result<[Scalar; 2], String> {
    p.affine().ok_or_else(|| "point at infinity".to_string())
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn eval_tool(s: &FlatStep, v: &[&Value], params: &[Scalar], witness: Option<[Scalar; 2]>) -> Result<Value, String> {
    let pt = |i: usize| *v[i].as_point().expect("typed input");
    let ln = |i: usize| *v[i].as_line().expect("typed input");
    let circ = |i: usize| *v[i].as_circle().expect("typed input");
    Ok(match s.tool {
        ToolId::FreePoint => Value::Point(HPoint::finite(params[0], params[1])),
        ToolId::PointOn => match v[0] {
            Value::Line(l) => {
                let x = l.point_at(params[0]).ok_or("line at infinity")?;
                Value::Point(HPoint::finite(x[0], x[1]))
            }
            Value::Circle(c) => Value::Point(c.point_at(params[0])),
            _ => return Err("point_on a conic is not supported".into()),
        },
        ToolId::LineThrough => Value::Line(LineValue::through(&pt(0), &pt(1), ObjType::Line)?),
        ToolId::Segment => Value::Line(LineValue::through(&pt(0), &pt(1), ObjType::Segment)?),
        ToolId::Ray => Value::Line(LineValue::through(&pt(0), &pt(1), ObjType::Ray)?),
        ToolId::CircleCenterPoint => Value::Circle(Circle::through(&pt(0), &pt(1)).map_err(err)?),
        ToolId::Intersect => Value::Point(select_intersection(v[0], v[1], s.branch.unwrap_or(0), witness)?),
        ToolId::Parallel => {
            let l = ln(0);
            let d = l.unit_direction().ok_or("line at infinity")?;
            Value::Line(LineValue::anchored(l.line.parallel_through(&pt(1)), &pt(1), d))
        }
        ToolId::Perpendicular => {
            let l = ln(0);
            let d = l.unit_direction().ok_or("line at infinity")?;
            let p = pt(1);
            finite(&p)?;
            Value::Line(LineValue::anchored(l.line.perpendicular_through(&p), &p, [-d[1], d[0]]))
        }
        ToolId::Midpoint => {
            let (a, b) = (finite(&pt(0))?, finite(&pt(1))?);
            Value::Point(HPoint::finite((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0))
        }
        ToolId::Compass => {
            let [p, q] = ln(0).frame.ok_or("segment at infinity")?;
            let r = (q[0] - p[0]).hypot(q[1] - p[1]);
            let c = finite(&pt(1))?;
            Value::Circle(Circle::new(c[0], c[1], r).map_err(err)?)
        }
        ToolId::CircleCenterRadius => {
            let c = finite(&pt(0))?;
            Value::Circle(Circle::new(c[0], c[1], params[0]).map_err(err)?)
        }
        ToolId::AngleMeasure => {
            let (a, b, c) = (finite(&pt(0))?, finite(&pt(1))?, finite(&pt(2))?);
            let u = [a[0] - b[0], a[1] - b[1]];
            let w = [c[0] - b[0], c[1] - b[1]];
            if u == [0.0, 0.0] || w == [0.0, 0.0] {
                return Err("angle with a zero side".into());
            }
            Value::Scalar((u[0] * w[1] - u[1] * w[0]).abs().atan2(u[0] * w[0] + u[1] * w[1]))
        }
        ToolId::Polar => {
            let c = v[0].as_conic().expect("typed input");
            Value::Line(LineValue::from_line(polar(&c, &pt(1)).map_err(err)?))
        }
        ToolId::Invert => Value::Point(invert_point(&circ(0), &pt(1)).map_err(err)?),
        ToolId::BhInvert => {
            let gamma = v[0].as_conic().expect("typed input");
            let cfg = BHConfig::new(gamma, pt(1)).map_err(err)?;
            Value::Point(bh_invert(&cfg, &pt(2)).map_err(err)?)
        }
        ToolId::Locus => unreachable!("loci are evaluated by the sweep"),
        ToolId::ConicThrough => {
            let pts: [HPoint; 5] = std::array::from_fn(pt);
            Value::Conic(conic_through(&pts).map_err(err)?)
        }
        ToolId::Polygon => {
            let pts: Vec<HPoint> = (0..v.len()).map(pt).collect();
            for p in &pts {
                finite(p)?;
            }
            Value::Polygon(pts)
        }
        ToolId::Distance => {
            let (a, b) = (finite(&pt(0))?, finite(&pt(1))?);
            Value::Scalar((a[0] - b[0]).hypot(a[1] - b[1]))
        }
        ToolId::Ratio => {
            let (a, b) = (v[0].as_scalar().expect("typed"), v[1].as_scalar().expect("typed"));
            if b == 0.0 {
                return Err("division by zero".into());
            }
            Value::Scalar(a / b)
        }
        ToolId::Harmonic => Value::Point(harmonic_conjugate(&pt(0), &pt(1), &pt(2)).map_err(err)?),
        ToolId::RadicalAxis => Value::Line(LineValue::from_line(
            ideal_common_secant(&circ(0), &circ(1)).map_err(err)?,
        )),
    })
}

/// Intersection candidates in canonical order: along the frame of a
/// line-like operand, or left of the center line first for two circles.
fn candidates(a: &Value, b: &Value) -> Result<Vec<HPoint>, String> {
    let (ca, cb) = (a.as_curve().expect("typed"), b.as_curve().expect("typed"));
    let mut pts = intersect(&ca, &cb).map_err(err)?.points;
    let frame_line = a.as_line().or(b.as_line()).filter(|l| l.frame.is_some());
    if let Some(l) = frame_line {
        let key = |p: &HPoint| p.affine().and_then(|x| l.param_of(x)).unwrap_or(Scalar::INFINITY);
        pts.sort_by(|p, q| key(p).total_cmp(&key(q)));
    } else if let (Value::Circle(c1), Value::Circle(c2)) = (a, b) {
        let side = |p: &HPoint| {
            let x = p.xy();
            (c2.cx - c1.cx) * (x[1] - c1.cy) - (c2.cy - c1.cy) * (x[0] - c1.cx)
        };
        pts.sort_by(|p, q| side(q).total_cmp(&side(p)));
    }
    Ok(pts)
}

fn select_intersection(a: &Value, b: &Value, branch: u8, witness: Option<[Scalar; 2]>) -> Result<HPoint, String> {
    let pts = candidates(a, b)?;
    let chosen = match pts.len() {
        0 => return Err("no real intersection".into()),
        1 => pts[0],
        _ => {
            let canonical = pts[(branch as usize).min(pts.len() - 1)];
            match witness {
                None => canonical,
                Some(w) => {
                    let d = |p: &HPoint| {
                        p.affine()
                            .map(|x| (x[0] - w[0]).hypot(x[1] - w[1]))
                            .unwrap_or(Scalar::INFINITY)
                    };
                    let (d0, d1) = (d(&pts[0]), d(&pts[1]));
                    let tie =
                        !d0.is_finite() && !d1.is_finite() || (d0 - d1).abs() <= EPS_INCIDENCE * (1.0 + d0.max(d1));
                    if tie {
                        canonical
                    } else if d0 < d1 {
                        pts[0]
                    } else {
                        pts[1]
                    }
                }
            }
        }
    };
    for op in [a, b] {
        if let Value::Line(l) = op {
            if !l.admits_point(&chosen) {
                return Err(format!("intersection lies outside the {}", l.kind));
            }
        }
    }
    Ok(chosen)
}
