use std::collections::{BTreeSet, HashMap, HashSet};

use indexmap::IndexMap;

use super::{EngineError, ObjType, ToolId};
use crate::geom::Scalar;

pub type ObjectId = String;

/// What a step invokes.
#[derive(Debug, Clone, PartialEq)]
pub enum Call {
    Tool(ToolId),
    Macro(String),
}

impl Call {
    pub fn name(&self) -> &str {
        match self {
            Call::Tool(t) => t.name(),
            Call::Macro(m) => m,
        }
    }
}

/// One construction step. Tool steps have exactly one output; macro calls
/// have one output per macro return value.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub outputs: Vec<(ObjType, ObjectId)>,
    pub call: Call,
    pub inputs: Vec<ObjectId>,
    pub params: Vec<Scalar>,
    pub branch: Option<u8>,
}

impl Step {
    pub fn tool(ty: ObjType, id: &str, tool: ToolId, inputs: &[&str], params: &[Scalar]) -> Self {
        Self {
            outputs: vec![(ty, id.to_string())],
            call: Call::Tool(tool),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            params: params.to_vec(),
            branch: tool.signature().branch.then_some(0),
        }
    }

    pub fn with_branch(mut self, b: u8) -> Self {
        self.branch = Some(b);
        self
    }

    pub fn macro_call(outputs: &[(ObjType, &str)], name: &str, inputs: &[&str]) -> Self {
        Self {
            outputs: outputs.iter().map(|(t, s)| (*t, s.to_string())).collect(),
            call: Call::Macro(name.to_string()),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            params: Vec::new(),
            branch: None,
        }
    }

    /// Id of the first output.
    pub fn id(&self) -> &str {
        &self.outputs[0].1
    }
}

/// A compound tool.
#[derive(Debug, Clone, PartialEq)]
pub struct Macro {
    pub name: String,
    pub formals: Vec<(ObjType, ObjectId)>,
    pub body: Vec<Step>,
    pub outputs: Vec<ObjectId>,
}

impl Macro {
    pub fn output_types(&self) -> Vec<ObjType> {
        self.outputs
            .iter()
            .map(|o| {
                self.body
                    .iter()
                    .flat_map(|s| &s.outputs)
                    .chain(&self.formals)
                    .find(|(_, id)| id == o)
                    .map(|(t, _)| *t)
                    .expect("validated macro output")
            })
            .collect()
    }
}

/// A named set of allowed tools.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Toolset {
    pub name: String,
    pub allowed: BTreeSet<ToolId>,
}

impl Toolset {
    pub const POSTULATES_ONLY: &'static str = "POSTULATES_ONLY";
    pub const EUCLID_BOOK1: &'static str = "EUCLID_BOOK1";
    pub const FULL: &'static str = "FULL";

    pub fn postulates_only() -> Self {
        use ToolId::*;
        Self {
            name: Self::POSTULATES_ONLY.into(),
            allowed: [
                FreePoint,
                PointOn,
                LineThrough,
                Segment,
                Ray,
                CircleCenterPoint,
                Intersect,
            ]
            .into(),
        }
    }

    pub fn euclid_book1() -> Self {
        use ToolId::*;
        let mut t = Self::postulates_only();
        t.name = Self::EUCLID_BOOK1.into();
        t.allowed.extend([Perpendicular, Parallel, Midpoint, Compass]);
        t
    }

    pub fn full() -> Self {
        Self {
            name: Self::FULL.into(),
            allowed: ToolId::ALL.into(),
        }
    }

    /// Built-in toolset by name, case-insensitive.
    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            Self::POSTULATES_ONLY => Some(Self::postulates_only()),
            Self::EUCLID_BOOK1 => Some(Self::euclid_book1()),
            Self::FULL => Some(Self::full()),
            _ => None,
        }
    }
}

/// A toolset violation: the (expanded) step id and the disallowed tool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub step: ObjectId,
    pub tool: ToolId,
}

/// A construction: ordered steps, the toolset it is played under and the
/// macros it may call.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub toolset: Toolset,
    pub macros: IndexMap<String, Macro>,
    pub steps: Vec<Step>,
}

impl Default for Figure {
    fn default() -> Self {
        Self::new(Toolset::full())
    }
}

/// A step after macro expansion, with inputs resolved to indices of
/// earlier flat steps.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FlatStep {
    pub id: ObjectId,
    pub ty: ObjType,
    pub tool: ToolId,
    pub inputs: Vec<usize>,
    pub params: Vec<Scalar>,
    pub branch: Option<u8>,
    pub top_level: bool,
}

pub(crate) struct Flat {
    pub steps: Vec<FlatStep>,
    pub index: HashMap<ObjectId, usize>,
}

impl Figure {
    pub fn new(toolset: Toolset) -> Self {
        Self {
            toolset,
            macros: IndexMap::new(),
            steps: Vec::new(),
        }
    }

    /// Appends a step after checking it against the figure so far.
    pub fn push(&mut self, step: Step) -> Result<(), EngineError> {
        let mut scope: HashMap<&str, ObjType> = HashMap::new();
        for s in &self.steps {
            for (t, id) in &s.outputs {
                scope.insert(id, *t);
            }
        }
        check_step(&step, &|id| scope.get(id).copied(), &self.macros)?;
        self.steps.push(step);
        Ok(())
    }

    /// Registers a macro, validating its body over its formals.
    pub fn define_macro(&mut self, m: Macro) -> Result<(), EngineError> {
        if ToolId::from_name(&m.name).is_some() || self.macros.contains_key(&m.name) {
            return Err(EngineError::NameClash(m.name));
        }
        validate_macro(&m, &self.macros)?;
        self.macros.insert(m.name.clone(), m);
        Ok(())
    }

    /// Full well-formedness check: every id defined once, inputs defined
    /// earlier, arities and types match.
    pub fn validate(&self) -> Result<(), EngineError> {
        let mut known: IndexMap<String, Macro> = IndexMap::new();
        for m in self.macros.values() {
            validate_macro(m, &known)?;
            known.insert(m.name.clone(), m.clone());
        }
        let mut scope: HashMap<&str, ObjType> = HashMap::new();
        for s in &self.steps {
            check_step(s, &|id| scope.get(id).copied(), &self.macros)?;
            for (t, id) in &s.outputs {
                scope.insert(id, *t);
            }
        }
        Ok(())
    }

    pub fn step(&self, id: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.outputs.iter().any(|(_, o)| o == id))
    }

    /// Ids of all top-level objects in definition order.
    pub fn object_ids(&self) -> Vec<&str> {
        self.steps
            .iter()
            .flat_map(|s| s.outputs.iter().map(|(_, id)| id.as_str()))
            .collect()
    }

    pub(crate) fn flatten(&self) -> Result<Flat, EngineError> {
        self.validate()?;
        let mut flat = Flat {
            steps: Vec::new(),
            index: HashMap::new(),
        };
        let mut names: HashMap<String, usize> = HashMap::new();
        for s in &self.steps {
            expand(s, &self.macros, &mut names, "", &mut flat, true)?;
        }
        Ok(flat)
    }

    /// Steps whose tool, after macro expansion, is outside the toolset.
    pub fn check_toolset(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for s in &self.steps {
            self.collect_violations(s, "", &mut out);
        }
        out
    }

    fn collect_violations(&self, s: &Step, prefix: &str, out: &mut Vec<Violation>) {
        match &s.call {
            Call::Tool(t) => {
                if !self.toolset.allowed.contains(&t.requires()) {
                    out.push(Violation {
                        step: format!("{prefix}{}", s.id()),
                        tool: *t,
                    });
                }
            }
            Call::Macro(name) => {
                if let Some(m) = self.macros.get(name) {
                    let inner = format!("{prefix}{}/", s.id());
                    for b in &m.body {
                        self.collect_violations(b, &inner, out);
                    }
                }
            }
        }
    }

    /// One line per step in evaluation order; macro calls are followed by
    /// their indented expansion.
    pub fn protocol(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push(format!("{}. {}", i + 1, protocol_line(s)));
            if let Call::Macro(name) = &s.call {
                if let Some(m) = self.macros.get(name) {
                    self.protocol_body(m, &format!("{}/", s.id()), 1, &mut out);
                }
            }
        }
        out
    }

    fn protocol_body(&self, m: &Macro, prefix: &str, depth: usize, out: &mut Vec<String>) {
        for b in &m.body {
            let mut b2 = b.clone();
            for (_, id) in &mut b2.outputs {
                *id = format!("{prefix}{id}");
            }
            out.push(format!("{}{}", "    ".repeat(depth), protocol_line(&b2)));
            if let Call::Macro(inner) = &b.call {
                if let Some(im) = self.macros.get(inner) {
                    self.protocol_body(im, &format!("{prefix}{}/", b.id()), depth + 1, out);
                }
            }
        }
    }
}

fn protocol_line(s: &Step) -> String {
    let outs: Vec<String> = s.outputs.iter().map(|(t, id)| format!("{t} {id}")).collect();
    let mut args: Vec<String> = s.inputs.clone();
    args.extend(s.params.iter().map(|p| crate::dsl::format_number(*p)));
    if let Some(b) = s.branch {
        args.push(format!("branch={b}"));
    }
    let mut line = format!("{} = {}({})", outs.join(", "), s.call.name(), args.join(", "));
    if matches!(s.call, Call::Macro(_)) {
        line.push_str(" [macro]");
    }
    if matches!(s.call, Call::Tool(t) if t.non_euclidean_input()) {
        line.push_str(" [NON-EUCLIDEAN-INPUT]");
    }
    line
}

/// Checks a step against the objects visible before it.
pub(crate) fn check_step(
    s: &Step,
    scope: &dyn Fn(&str) -> Option<ObjType>,
    macros: &IndexMap<String, Macro>,
) -> Result<(), EngineError> {
    let bad = |msg: String| Err(EngineError::MalformedFigure(format!("{}: {msg}", s.id())));
    if s.outputs.is_empty() {
        return Err(EngineError::MalformedFigure("step without outputs".into()));
    }
    let mut seen = HashSet::new();
    for (_, id) in &s.outputs {
        if scope(id).is_some() || !seen.insert(id) {
            return bad(format!("'{id}' is defined twice"));
        }
    }
    let mut types = Vec::with_capacity(s.inputs.len());
    for i in &s.inputs {
        types.push(scope(i).ok_or_else(|| EngineError::UnknownObject(i.clone()))?);
    }
    match &s.call {
        Call::Tool(t) => {
            let sig = t.signature();
            if s.outputs.len() != 1 {
                return bad(format!("{t} has a single output"));
            }
            if !sig.accepts_arity(s.inputs.len()) {
                return bad(format!("{t} takes {}, got {}", sig.arity_text(), s.inputs.len()));
            }
            for (k, (i, ty)) in s.inputs.iter().zip(&types).enumerate() {
                let slot = sig.slot(k).expect("arity checked");
                if !slot.accepts(*ty) {
                    return bad(format!(
                        "argument {} of {t} must be a {}, '{i}' is a {ty}",
                        k + 1,
                        slot.describe(),
                    ));
                }
            }
            if s.params.len() != sig.params {
                return bad(format!("{t} takes {} numbers, got {}", sig.params, s.params.len()));
            }
            if s.params.iter().any(|p| !p.is_finite()) {
                return bad("numbers must be finite".into());
            }
            match (sig.branch, s.branch) {
                (true, Some(0 | 1)) | (false, None) => {}
                (true, _) => return bad(format!("{t} needs branch=0 or branch=1")),
                (false, Some(_)) => return bad(format!("{t} takes no branch selector")),
            }
            let declared = s.outputs[0].0;
            if declared != t.output() {
                return bad(format!("{t} produces a {}, declared {declared}", t.output()));
            }
        }
        Call::Macro(name) => {
            let Some(m) = macros.get(name) else {
                return bad(format!("unknown tool or macro '{name}'"));
            };
            if s.inputs.len() != m.formals.len() {
                return bad(format!(
                    "{name} takes {} objects, got {}",
                    m.formals.len(),
                    s.inputs.len()
                ));
            }
            for ((ft, _), (i, ty)) in m.formals.iter().zip(s.inputs.iter().zip(&types)) {
                if ty != ft {
                    return bad(format!("'{i}' is a {ty}, {name} expects a {ft}"));
                }
            }
            let types = m.output_types();
            if types.len() != s.outputs.len() {
                return bad(format!("{name} returns {} objects", types.len()));
            }
            for ((t, id), mt) in s.outputs.iter().zip(types) {
                if *t != mt {
                    return bad(format!("'{id}' declared {t}, {name} returns a {mt}"));
                }
            }
            if !s.params.is_empty() || s.branch.is_some() {
                return bad(format!("macro {name} takes objects only"));
            }
        }
    }
    Ok(())
}

fn validate_macro(m: &Macro, known: &IndexMap<String, Macro>) -> Result<(), EngineError> {
    let ill = |msg: String| Err(EngineError::IllFormedBody(format!("{}: {msg}", m.name)));
    if m.body.is_empty() {
        return ill("empty body".into());
    }
    if m.outputs.is_empty() {
        return ill("no return values".into());
    }
    let mut scope: HashMap<&str, ObjType> = HashMap::new();
    for (t, id) in &m.formals {
        if scope.insert(id, *t).is_some() {
            return ill(format!("formal '{id}' repeated"));
        }
    }
    for s in &m.body {
        check_step(s, &|id| scope.get(id).copied(), known).or_else(|e| ill(e.to_string()))?;
        for (t, id) in &s.outputs {
            scope.insert(id, *t);
        }
    }
    for o in &m.outputs {
        if !scope.contains_key(o.as_str()) {
            return ill(format!("returns undefined '{o}'"));
        }
    }
    Ok(())
}

fn expand(
    s: &Step,
    macros: &IndexMap<String, Macro>,
    names: &mut HashMap<String, usize>,
    prefix: &str,
    flat: &mut Flat,
    top_level: bool,
) -> Result<(), EngineError> {
    let inputs: Vec<usize> = s
        .inputs
        .iter()
        .map(|i| {
            names
                .get(i)
                .copied()
                .ok_or_else(|| EngineError::UnknownObject(i.clone()))
        })
        .collect::<Result<_, _>>()?;
    match &s.call {
        Call::Tool(t) => {
            let id = format!("{prefix}{}", s.id());
            let k = flat.steps.len();
            flat.steps.push(FlatStep {
                id: id.clone(),
                ty: s.outputs[0].0,
                tool: *t,
                inputs,
                params: s.params.clone(),
                branch: s.branch,
                top_level,
            });
            flat.index.insert(id, k);
            names.insert(s.id().to_string(), k);
        }
        Call::Macro(name) => {
            let m = &macros[name];
            let mut local: HashMap<String, usize> = HashMap::new();
            for ((_, f), i) in m.formals.iter().zip(inputs) {
                local.insert(f.clone(), i);
            }
            let inner = format!("{prefix}{}/", s.id());
            for b in &m.body {
                expand(b, macros, &mut local, &inner, flat, false)?;
            }
            for ((_, out), ret) in s.outputs.iter().zip(&m.outputs) {
                let k = local[ret];
                names.insert(out.clone(), k);
                let id = format!("{prefix}{out}");
                flat.index.insert(id, k);
            }
        }
    }
    Ok(())
}
