use std::fmt;

/// Declared type of a construction object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjType {
    Point,
    Line,
    Segment,
    Ray,
    Circle,
    Conic,
    Scalar,
    Locus,
    Polygon,
}

impl ObjType {
    pub const ALL: [ObjType; 9] = [
        ObjType::Point,
        ObjType::Line,
        ObjType::Segment,
        ObjType::Ray,
        ObjType::Circle,
        ObjType::Conic,
        ObjType::Scalar,
        ObjType::Locus,
        ObjType::Polygon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjType::Point => "point",
            ObjType::Line => "line",
            ObjType::Segment => "segment",
            ObjType::Ray => "ray",
            ObjType::Circle => "circle",
            ObjType::Conic => "conic",
            ObjType::Scalar => "scalar",
            ObjType::Locus => "locus",
            ObjType::Polygon => "polygon",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    pub fn is_line_like(self) -> bool {
        matches!(self, ObjType::Line | ObjType::Segment | ObjType::Ray)
    }
}

impl fmt::Display for ObjType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What an object input slot accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Point,
    /// line, segment or ray
    LineLike,
    Segment,
    Circle,
    /// circle or conic
    ConicLike,
    /// line-like, circle or conic
    Curve,
    Scalar,
}

impl Slot {
    pub fn accepts(self, t: ObjType) -> bool {
        match self {
            Slot::Point => t == ObjType::Point,
            Slot::LineLike => t.is_line_like(),
            Slot::Segment => t == ObjType::Segment,
            Slot::Circle => t == ObjType::Circle,
            Slot::ConicLike => matches!(t, ObjType::Circle | ObjType::Conic),
            Slot::Curve => t.is_line_like() || matches!(t, ObjType::Circle | ObjType::Conic),
            Slot::Scalar => t == ObjType::Scalar,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Slot::Point => "point",
            Slot::LineLike => "line, segment or ray",
            Slot::Segment => "segment",
            Slot::Circle => "circle",
            Slot::ConicLike => "circle or conic",
            Slot::Curve => "line, segment, ray, circle or conic",
            Slot::Scalar => "scalar",
        }
    }
}

/// Argument shape of a tool: object inputs first, then numbers, then the
/// optional branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub inputs: &'static [Slot],
    /// Extra trailing inputs of this slot, with the minimum total count.
    pub variadic: Option<(Slot, usize)>,
    pub params: usize,
    pub branch: bool,
}

impl Signature {
    pub fn accepts_arity(&self, n: usize) -> bool {
        match self.variadic {
            Some((_, min)) => n >= min,
            None => n == self.inputs.len(),
        }
    }

    pub fn slot(&self, i: usize) -> Option<Slot> {
        self.inputs.get(i).copied().or_else(|| self.variadic.map(|(s, _)| s))
    }

    pub fn arity_text(&self) -> String {
        match self.variadic {
            Some((_, min)) => format!("at least {min} objects"),
            None => format!("{} objects", self.inputs.len()),
        }
    }
}

/// The fixed tool table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ToolId {
    FreePoint,
    PointOn,
    LineThrough,
    Segment,
    Ray,
    CircleCenterPoint,
    Intersect,
    Parallel,
    Perpendicular,
    Midpoint,
    Compass,
    CircleCenterRadius,
    AngleMeasure,
    Polar,
    Invert,
    BhInvert,
    Locus,
    ConicThrough,
    Polygon,
    Distance,
    Ratio,
    Harmonic,
    RadicalAxis,
}

use Slot as S;

impl ToolId {
    pub const ALL: [ToolId; 23] = [
        ToolId::FreePoint,
        ToolId::PointOn,
        ToolId::LineThrough,
        ToolId::Segment,
        ToolId::Ray,
        ToolId::CircleCenterPoint,
        ToolId::Intersect,
        ToolId::Parallel,
        ToolId::Perpendicular,
        ToolId::Midpoint,
        ToolId::Compass,
        ToolId::CircleCenterRadius,
        ToolId::AngleMeasure,
        ToolId::Polar,
        ToolId::Invert,
        ToolId::BhInvert,
        ToolId::Locus,
        ToolId::ConicThrough,
        ToolId::Polygon,
        ToolId::Distance,
        ToolId::Ratio,
        ToolId::Harmonic,
        ToolId::RadicalAxis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ToolId::FreePoint => "free_point",
            ToolId::PointOn => "point_on",
            ToolId::LineThrough => "line_through",
            ToolId::Segment => "segment",
            ToolId::Ray => "ray",
            ToolId::CircleCenterPoint => "circle_center_point",
            ToolId::Intersect => "intersect",
            ToolId::Parallel => "parallel",
            ToolId::Perpendicular => "perpendicular",
            ToolId::Midpoint => "midpoint",
            ToolId::Compass => "compass",
            ToolId::CircleCenterRadius => "circle_center_radius",
            ToolId::AngleMeasure => "angle_measure",
            ToolId::Polar => "polar",
            ToolId::Invert => "invert",
            ToolId::BhInvert => "bh_invert",
            ToolId::Locus => "locus",
            ToolId::ConicThrough => "conic_through",
            ToolId::Polygon => "polygon",
            ToolId::Distance => "distance",
            ToolId::Ratio => "ratio",
            ToolId::Harmonic => "harmonic",
            ToolId::RadicalAxis => "radical_axis",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    pub fn signature(self) -> Signature {
        let sig = |inputs: &'static [Slot], params: usize| Signature {
            inputs,
            variadic: None,
            params,
            branch: false,
        };
        match self {
            ToolId::FreePoint => sig(&[], 2),
            ToolId::PointOn => sig(&[S::Curve], 1),
            ToolId::LineThrough | ToolId::Segment | ToolId::Ray => sig(&[S::Point, S::Point], 0),
            ToolId::CircleCenterPoint | ToolId::Midpoint | ToolId::Distance => sig(&[S::Point, S::Point], 0),
            ToolId::Intersect => Signature {
                branch: true,
                ..sig(&[S::Curve, S::Curve], 0)
            },
            ToolId::Parallel | ToolId::Perpendicular => sig(&[S::LineLike, S::Point], 0),
            ToolId::Compass => sig(&[S::Segment, S::Point], 0),
            ToolId::CircleCenterRadius => sig(&[S::Point], 1),
            ToolId::AngleMeasure | ToolId::Harmonic => sig(&[S::Point, S::Point, S::Point], 0),
            ToolId::Polar => sig(&[S::ConicLike, S::Point], 0),
            ToolId::Invert => sig(&[S::Circle, S::Point], 0),
            ToolId::BhInvert => sig(&[S::ConicLike, S::Point, S::Point], 0),
            ToolId::Locus => sig(&[S::Point, S::Point, S::Curve], 1),
            ToolId::ConicThrough => sig(&[S::Point; 5], 0),
            ToolId::Polygon => Signature {
                variadic: Some((S::Point, 3)),
                ..sig(&[], 0)
            },
            ToolId::Ratio => sig(&[S::Scalar, S::Scalar], 0),
            ToolId::RadicalAxis => sig(&[S::Circle, S::Circle], 0),
        }
    }

    /// Type of the object the tool produces.
    pub fn output(self) -> ObjType {
        match self {
            ToolId::FreePoint
            | ToolId::PointOn
            | ToolId::Intersect
            | ToolId::Midpoint
            | ToolId::Invert
            | ToolId::BhInvert
            | ToolId::Harmonic => ObjType::Point,
            ToolId::LineThrough | ToolId::Parallel | ToolId::Perpendicular | ToolId::Polar | ToolId::RadicalAxis => {
                ObjType::Line
            }
            ToolId::Segment => ObjType::Segment,
            ToolId::Ray => ObjType::Ray,
            ToolId::CircleCenterPoint | ToolId::Compass | ToolId::CircleCenterRadius => ObjType::Circle,
            ToolId::ConicThrough => ObjType::Conic,
            ToolId::AngleMeasure | ToolId::Distance | ToolId::Ratio => ObjType::Scalar,
            ToolId::Locus => ObjType::Locus,
            ToolId::Polygon => ObjType::Polygon,
        }
    }

    /// Tools that turn a numeric value into geometry or geometry into a
    /// number, bypassing ruler and compass.
    pub fn non_euclidean_input(self) -> bool {
        matches!(self, ToolId::CircleCenterRadius | ToolId::AngleMeasure)
    }

    /// Tools a toolset must allow for this one to be usable. A polygon is a
    /// chain of segments.
    pub fn requires(self) -> ToolId {
        match self {
            ToolId::Polygon => ToolId::Segment,
            t => t,
        }
    }

    pub fn is_draggable(self) -> bool {
        matches!(self, ToolId::FreePoint | ToolId::PointOn)
    }
}

impl fmt::Display for ToolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
