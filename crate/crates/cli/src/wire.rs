//! The session protocol: one JSON object per message in each direction.
//!
//! Client messages are `load`, `drag`, `toolset` and `trace`; the server
//! answers each with either a `scene` or an `error` frame. Numbers go out
//! with 17 significant digits so a client sees exactly the kernel's values.

use geokernel::construction::{
    evaluate_with, BranchState, Figure, LineValue, Polyline, Scene, SceneObject, Toolset, Value,
};
use geokernel::dsl::{format_number, parse, ParseError};
use geokernel::geom::HPoint;
use serde_json::{json, Map, Number, Value as Json};

use crate::trace_by_id;

/// A JSON number printed with 17 significant digits; non-finite values
/// become `null`.
pub fn num(x: f64) -> Json {
    if !x.is_finite() {
        return Json::Null;
    }
    format_number(x)
        .parse::<Number>()
        .map(Json::Number)
        .unwrap_or(Json::Null)
}

fn pair(p: [f64; 2]) -> Json {
    json!([num(p[0]), num(p[1])])
}

fn point_data(p: &HPoint) -> Json {
    match p.affine() {
        Some([x, y]) => json!({"x": num(x), "y": num(y)}),
        None => {
            let [dx, dy, _] = p.coords();
            json!({"at_infinity": true, "dx": num(dx), "dy": num(dy)})
        }
    }
}

fn line_data(l: &LineValue) -> Json {
    let [a, b, c] = l.line.coords();
    let mut m = Map::new();
    m.insert("a".into(), num(a));
    m.insert("b".into(), num(b));
    m.insert("c".into(), num(c));
    if let Some([p, q]) = l.frame {
        m.insert("p".into(), pair(p));
        m.insert("q".into(), pair(q));
    }
    Json::Object(m)
}

fn runs_data(poly: &Polyline) -> Json {
    let runs: Vec<Json> = poly
        .runs()
        .iter()
        .map(|r| Json::Array(r.iter().map(|p| pair(*p)).collect()))
        .collect();
    json!({"closed": poly.closed, "runs": runs})
}

/// Kind-specific payload of an existing value.
pub fn value_data(v: &Value) -> Json {
    match v {
        Value::Point(p) => point_data(p),
        Value::Line(l) => line_data(l),
        Value::Circle(c) => json!({"cx": num(c.cx), "cy": num(c.cy), "r": num(c.r)}),
        Value::Conic(c) => json!({"coeffs": c.coeffs().iter().map(|x| num(*x)).collect::<Vec<_>>()}),
        Value::Scalar(x) => json!({"value": num(*x)}),
        Value::Polygon(pts) => json!({"vertices": pts.iter().map(point_data).collect::<Vec<_>>()}),
        Value::Locus(poly) => runs_data(poly),
    }
}

fn object_json(o: &SceneObject) -> Json {
    let mut m = Map::new();
    m.insert("id".into(), json!(o.id));
    m.insert("kind".into(), json!(o.ty.name()));
    m.insert("data".into(), o.value.as_ref().map_or(Json::Null, value_data));
    m.insert("exists".into(), json!(o.exists()));
    m.insert("draggable".into(), json!(o.draggable));
    if let Some(r) = &o.reason {
        m.insert("reason".into(), json!(r));
    }
    Json::Object(m)
}

/// A `scene` frame. Toolset violations ride along so a client can flag
/// disallowed steps.
pub fn scene_frame(fig: &Figure, scene: &Scene) -> Json {
    let objects: Vec<Json> = scene.objects.values().map(object_json).collect();
    let violations: Vec<Json> = fig
        .check_toolset()
        .iter()
        .map(|v| json!({"id": v.step, "tool": v.tool.name()}))
        .collect();
    json!({
        "op": "scene",
        "toolset": fig.toolset.name,
        "objects": objects,
        "violations": violations,
    })
}

pub fn error_frame(message: impl Into<String>, at: Option<(usize, usize)>) -> Json {
    let (line, col) = at.map_or((Json::Null, Json::Null), |(l, c)| (json!(l), json!(c)));
    json!({"op": "error", "message": message.into(), "line": line, "col": col})
}

fn parse_error_frame(errors: &[ParseError]) -> Json {
    let message = errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
    error_frame(message, errors.first().map(|e| (e.line, e.column)))
}

/// One client's figure and drag state. Messages must be fed in arrival
/// order; branch continuity depends on it.
#[derive(Debug, Default)]
pub struct Session {
    figure: Option<Figure>,
    state: BranchState,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn figure(&self) -> Option<&Figure> {
        self.figure.as_ref()
    }

    /// Handles one raw message. Malformed JSON yields an error frame and
    /// leaves the session untouched.
    pub fn handle_text(&mut self, text: &str) -> Json {
        match serde_json::from_str::<Json>(text) {
            Ok(msg) => self.handle(&msg),
            Err(e) => error_frame(format!("malformed message: {e}"), Some((e.line(), e.column()))),
        }
    }

    pub fn handle(&mut self, msg: &Json) -> Json {
        let op = msg.get("op").and_then(Json::as_str);
        let reply = match op {
            Some("load") => self.load(msg),
            Some("drag") => self.drag(msg),
            Some("toolset") => self.toolset(msg),
            Some("trace") => self.trace(msg),
            Some(other) => Err(error_frame(format!("unknown op '{other}'"), None)),
            None => Err(error_frame("message has no string field 'op'", None)),
        };
        reply.unwrap_or_else(|e| e)
    }

    fn load(&mut self, msg: &Json) -> Result<Json, Json> {
        let src = str_field(msg, "source")?;
        let fig = parse(src).map_err(|e| parse_error_frame(&e))?;
        let (scene, state) =
            evaluate_with(&fig, &BranchState::default()).map_err(|e| error_frame(e.to_string(), None))?;
        let frame = scene_frame(&fig, &scene);
        self.figure = Some(fig);
        self.state = state;
        Ok(frame)
    }

    fn loaded(&self) -> Result<&Figure, Json> {
        self.figure
            .as_ref()
            .ok_or_else(|| error_frame("no figure loaded", None))
    }

    fn drag(&mut self, msg: &Json) -> Result<Json, Json> {
        let id = str_field(msg, "id")?;
        let (x, y) = (num_field(msg, "x")?, num_field(msg, "y")?);
        let fig = self.loaded()?;
        let (scene, state) = geokernel::construction::drag(fig, &self.state, id, [x, y])
            .map_err(|e| error_frame(e.to_string(), None))?;
        let frame = scene_frame(fig, &scene);
        self.state = state;
        Ok(frame)
    }

    /// Switches the toolset the figure is checked against. Without a loaded
    /// figure this starts an empty one.
    fn toolset(&mut self, msg: &Json) -> Result<Json, Json> {
        let name = str_field(msg, "name")?;
        let ts = Toolset::by_name(name).ok_or_else(|| error_frame(format!("unknown toolset '{name}'"), None))?;
        let fig = self.figure.get_or_insert_with(Figure::default);
        fig.toolset = ts;
        let (scene, state) = evaluate_with(fig, &self.state).map_err(|e| error_frame(e.to_string(), None))?;
        let frame = scene_frame(fig, &scene);
        self.state = state;
        Ok(frame)
    }

    /// Answers with the current scene plus a `trace` member holding every
    /// sample. The drag state is not advanced by a trace.
    fn trace(&mut self, msg: &Json) -> Result<Json, Json> {
        let mover = str_field(msg, "mover")?;
        let path = str_field(msg, "path")?;
        let target = str_field(msg, "target")?;
        let n = msg
            .get("n")
            .and_then(Json::as_u64)
            .ok_or_else(|| error_frame("field 'n' must be a non-negative integer", None))?;
        let fig = self.loaded()?;
        let poly = trace_by_id(fig, &self.state, mover, path, target, n as usize)
            .map_err(|e| error_frame(e.to_string(), None))?;
        let (scene, _) = evaluate_with(fig, &self.state).map_err(|e| error_frame(e.to_string(), None))?;
        let mut frame = scene_frame(fig, &scene);
        let samples: Vec<Json> = poly
            .samples
            .iter()
            .map(|s| match s.point {
                Some([x, y]) => json!([num(s.t), num(x), num(y)]),
                None => json!([num(s.t), null, null]),
            })
            .collect();
        frame["trace"] = json!({
            "mover": mover,
            "path": path,
            "target": target,
            "closed": poly.closed,
            "samples": samples,
        });
        Ok(frame)
    }
}

fn str_field<'a>(msg: &'a Json, key: &str) -> Result<&'a str, Json> {
    msg.get(key)
        .and_then(Json::as_str)
        .ok_or_else(|| error_frame(format!("field '{key}' must be a string"), None))
}

fn num_field(msg: &Json, key: &str) -> Result<f64, Json> {
    msg.get(key)
        .and_then(Json::as_f64)
        .filter(|x| x.is_finite())
        .ok_or_else(|| error_frame(format!("field '{key}' must be a finite number"), None))
}
