use nalgebra::{Matrix3, Vector3};

use crate::geom::{intersect, Conic, Curve, HLine, HPoint, Scalar, EPS_INCIDENCE};

use super::TransformError;

/// Quadratic inversion in a conic: `P ↦ polar(P) ∩ line(A, P)`.
///
/// The base points `B`, `C` are the meets of the polar of `A` with `gamma`;
/// they are `None` when those meets are not real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BHConfig {
    pub gamma: Conic,
    pub pole: HPoint,
    pub base_b: Option<HPoint>,
    pub base_c: Option<HPoint>,
}

/// Vertex of the fundamental triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fundamental {
    A,
    B,
    C,
}

impl BHConfig {
    pub fn new(gamma: Conic, pole: HPoint) -> Result<Self, TransformError> {
        if gamma.rank() < 3 {
            return Err(TransformError::SingularConic);
        }
        if gamma.contains(&pole) {
            return Err(TransformError::DegenerateInput("pole lies on the conic"));
        }
        let polar = gamma.polar_of(&pole);
        let meets = intersect(&Curve::Line(polar), &Curve::Conic(gamma))?;
        let (base_b, base_c) = match meets.points.as_slice() {
            [b, c] if !meets.tangent => (Some(*b), Some(*c)),
            _ => (None, None),
        };
        Ok(Self {
            gamma,
            pole,
            base_b,
            base_c,
        })
    }

    /// Overrides the order of the real base points.
    pub fn with_base_points(mut self, b: HPoint, c: HPoint) -> Result<Self, TransformError> {
        let polar = self.gamma.polar_of(&self.pole);
        for p in [&b, &c] {
            if !self.gamma.contains(p) || !polar.contains(p) {
                return Err(TransformError::DegenerateInput("not a base point"));
            }
        }
        self.base_b = Some(b);
        self.base_c = Some(c);
        Ok(self)
    }

    pub fn vertex(&self, which: Fundamental) -> Result<HPoint, TransformError> {
        match which {
            Fundamental::A => Ok(self.pole),
            Fundamental::B => self.base_b.ok_or(TransformError::ComplexBasePoints),
            Fundamental::C => self.base_c.ok_or(TransformError::ComplexBasePoints),
        }
    }

    /// Lines `BC`, `AB`, `AC` of the fundamental triangle.
    pub fn fundamental_lines(&self) -> Result<[HLine; 3], TransformError> {
        let b = self.vertex(Fundamental::B)?;
        let c = self.vertex(Fundamental::C)?;
        Ok([b.join(&c), self.pole.join(&b), self.pole.join(&c)])
    }

    /// Unnormalized homogeneous image `(A × P) × (M P)`.
    fn raw_image(&self, p: &Vector3<Scalar>) -> Vector3<Scalar> {
        let a = Vector3::from(self.pole.coords());
        a.cross(p).cross(&(self.gamma.matrix() * p))
    }
}

/// Image of `P` under the quadratic inversion.
///
/// Points of the polar of `A` other than the base points all map to `A`.
pub fn bh_invert(cfg: &BHConfig, p: &HPoint) -> Result<HPoint, TransformError> {
    if p.coincides(&cfg.pole) {
        return Err(TransformError::FundamentalPoint);
    }
    for b in [cfg.base_b, cfg.base_c].into_iter().flatten() {
        if p.coincides(&b) {
            return Err(TransformError::FundamentalPoint);
        }
    }
    let v = Vector3::from(p.coords());
    let a = Vector3::from(cfg.pole.coords());
    let ap = a.cross(&v);
    let ap = ap / ap.amax();
    let pol = cfg.gamma.matrix() * v;
    let pol = pol / pol.amax();
    let img = ap.cross(&pol);
    if img.amax() <= EPS_INCIDENCE {
        return Err(TransformError::IndeterminateIntersection);
    }
    Ok(HPoint::from_coords(img.into()))
}

/// Limit of `bh_invert(P)` as `P` tends to a fundamental point along
/// `approach`, from the first-order term of the map at that point.
pub fn bh_blowup_limit(cfg: &BHConfig, base: Fundamental, approach: &HLine) -> Result<HPoint, TransformError> {
    let p0 = cfg.vertex(base)?;
    if !approach.contains(&p0) {
        return Err(TransformError::DegenerateInput("approach line misses the point"));
    }
    if let Ok(lines) = cfg.fundamental_lines() {
        if lines.iter().any(|l| l.contains(&p0) && same_line(l, approach)) {
            return Err(TransformError::ExceptionalApproach);
        }
    }
    let d = Vector3::from(approach.point_at_infinity().coords());
    let p = Vector3::from(p0.coords());
    let a = Vector3::from(cfg.pole.coords());
    let m = cfg.gamma.matrix();
    let first = a.cross(&d).cross(&(m * p)) + a.cross(&p).cross(&(m * d));
    if first.amax() <= EPS_INCIDENCE {
        return Err(TransformError::ExceptionalApproach);
    }
    Ok(HPoint::from_coords(first.into()))
}

fn same_line(l: &HLine, m: &HLine) -> bool {
    let c = Vector3::from(l.coords()).cross(&Vector3::from(m.coords()));
    c.amax() <= EPS_INCIDENCE
}

/// Image of a line: the conic `l · F(X) = 0`, which contains the three
/// fundamental points. Lines through a fundamental point give line pairs.
pub fn bh_line_image(cfg: &BHConfig, l: &HLine) -> Conic {
    let lv = Vector3::from(l.coords());
    let q = |x: Vector3<Scalar>| lv.dot(&cfg.raw_image(&x));
    let e = [Vector3::x(), Vector3::y(), Vector3::z()];
    let m = Matrix3::from_fn(|i, j| {
        if i == j {
            q(e[i])
        } else {
            (q(e[i] + e[j]) - q(e[i]) - q(e[j])) / 2.0
        }
    });
    Conic::from_matrix(m)
}
