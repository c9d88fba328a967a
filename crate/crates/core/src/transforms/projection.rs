use nalgebra::Vector3;

use crate::geom::{HPoint, Scalar};

use super::TransformError;

/// A plane in space with an orthonormal frame; points of the plane are
/// written `origin + x·u + y·v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFrame {
    pub origin: Vector3<Scalar>,
    pub u: Vector3<Scalar>,
    pub v: Vector3<Scalar>,
}

impl PlaneFrame {
    /// Builds a frame from an origin and two spanning vectors, which are
    /// orthonormalized. Returns `None` if they are parallel.
    pub fn new(origin: [Scalar; 3], u: [Scalar; 3], v: [Scalar; 3]) -> Option<Self> {
        let u = Vector3::from(u);
        let v = Vector3::from(v);
        let u = u.try_normalize(1e-12)?;
        let v = (v - u * u.dot(&v)).try_normalize(1e-12)?;
        Some(Self {
            origin: Vector3::from(origin),
            u,
            v,
        })
    }

    /// The plane `z = h` with the standard axes.
    pub fn horizontal(h: Scalar) -> Self {
        Self {
            origin: Vector3::new(0.0, 0.0, h),
            u: Vector3::x(),
            v: Vector3::y(),
        }
    }

    pub fn normal(&self) -> Vector3<Scalar> {
        self.u.cross(&self.v)
    }

    /// Space point of the plane point `p`, as a homogeneous 4-vector split
    /// into its spatial part and weight.
    fn lift(&self, p: &HPoint) -> (Vector3<Scalar>, Scalar) {
        let [x, y, w] = p.coords();
        (self.origin * w + self.u * x + self.v * y, w)
    }

    pub fn to_space(&self, p: [Scalar; 2]) -> Vector3<Scalar> {
        self.origin + self.u * p[0] + self.v * p[1]
    }

    fn contains(&self, q: &Vector3<Scalar>) -> bool {
        self.normal().dot(&(q - self.origin)).abs() <= 1e-12 * (1.0 + q.norm())
    }
}

/// Projects a point of `src` from `center` onto `dst`.
///
/// Rays parallel to `dst` give points at infinity; points at infinity of
/// `src` are handled through their direction.
pub fn central_project(
    center: [Scalar; 3],
    src: &PlaneFrame,
    dst: &PlaneFrame,
    p: &HPoint,
) -> Result<HPoint, TransformError> {
    let c = Vector3::from(center);
    if src.contains(&c) || dst.contains(&c) {
        return Err(TransformError::DegenerateInput("center lies on a plane"));
    }
    let (pw, w) = src.lift(p);
    let ray = pw - c * w;
    if ray.amax() <= 1e-12 * (1.0 + pw.amax()) {
        return Err(TransformError::DegenerateRay);
    }
    let n = dst.normal();
    let den = n.dot(&ray);
    let num = (c - dst.origin) * den + ray * n.dot(&(dst.origin - c));
    Ok(HPoint::new(dst.u.dot(&num), dst.v.dot(&num), den))
}
