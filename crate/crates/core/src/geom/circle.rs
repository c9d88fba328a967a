use super::{Conic, GeomError, HLine, HPoint, Scalar, EPS_INCIDENCE};

/// A circle kept in center/radius form; see [`Circle::to_conic`] for the
/// matrix form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub cx: Scalar,
    pub cy: Scalar,
    pub r: Scalar,
}

impl Circle {
    pub fn new(cx: Scalar, cy: Scalar, r: Scalar) -> Result<Self, GeomError> {
        if !(r > 0.0 && r.is_finite()) || !cx.is_finite() || !cy.is_finite() {
            return Err(GeomError::InvalidRadius(r));
        }
        Ok(Self { cx, cy, r })
    }

    /// Circle with center `c` passing through `p`.
    pub fn through(c: &HPoint, p: &HPoint) -> Result<Self, GeomError> {
        let [cx, cy] = c.affine().ok_or(GeomError::PointAtInfinity)?;
        let r = c.distance(p).ok_or(GeomError::PointAtInfinity)?;
        Self::new(cx, cy, r)
    }

    pub fn center(&self) -> HPoint {
        HPoint::finite(self.cx, self.cy)
    }

    pub fn center_xy(&self) -> [Scalar; 2] {
        [self.cx, self.cy]
    }

    /// Point at angle `theta` measured counterclockwise from +x.
    pub fn point_at(&self, theta: Scalar) -> HPoint {
        HPoint::finite(self.cx + self.r * theta.cos(), self.cy + self.r * theta.sin())
    }

    /// Angle of `p` about the center, in `[0, 2π)`.
    pub fn angle_of(&self, p: [Scalar; 2]) -> Scalar {
        let a = (p[1] - self.cy).atan2(p[0] - self.cx);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    /// `|p − c|² − r²` for a finite point.
    pub fn power(&self, p: [Scalar; 2]) -> Scalar {
        let dx = p[0] - self.cx;
        let dy = p[1] - self.cy;
        dx * dx + dy * dy - self.r * self.r
    }

    /// Relative incidence test: `| |p − c| − r | ≤ eps · max(1, r)`.
    pub fn contains(&self, p: &HPoint) -> bool {
        match p.affine() {
            Some(q) => {
                let d = (q[0] - self.cx).hypot(q[1] - self.cy);
                (d - self.r).abs() <= EPS_INCIDENCE * self.r.max(1.0)
            }
            None => false,
        }
    }

    pub fn to_conic(&self) -> Conic {
        let (cx, cy, r) = (self.cx, self.cy, self.r);
        Conic::from_rows([[1.0, 0.0, -cx], [0.0, 1.0, -cy], [-cx, -cy, cx * cx + cy * cy - r * r]])
    }
}

/// A circle or a line: the objects closed under inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenCircle {
    Circle(Circle),
    Line(HLine),
}

impl GenCircle {
    pub fn contains(&self, p: &HPoint) -> bool {
        match self {
            GenCircle::Circle(c) => c.contains(p),
            GenCircle::Line(l) => l.contains(p),
        }
    }

    pub fn as_circle(&self) -> Option<&Circle> {
        match self {
            GenCircle::Circle(c) => Some(c),
            GenCircle::Line(_) => None,
        }
    }

    pub fn as_line(&self) -> Option<&HLine> {
        match self {
            GenCircle::Line(l) => Some(l),
            GenCircle::Circle(_) => None,
        }
    }
}
