use std::fmt;

use super::{cross3, dot3, max_abs3, Scalar, EPS_INCIDENCE};

/// Normalizes a homogeneous triple to max-abs one. The sign is fixed by the
/// first component in `order` whose magnitude exceeds the incidence tolerance.
fn normalize(v: [Scalar; 3], order: [usize; 3]) -> [Scalar; 3] {
    let m = max_abs3(v);
    if m == 0.0 || !m.is_finite() {
        return v;
    }
    let mut out = [v[0] / m, v[1] / m, v[2] / m];
    let pivot = order
        .iter()
        .copied()
        .find(|&i| out[i].abs() > EPS_INCIDENCE)
        .unwrap_or(order[0]);
    if out[pivot] < 0.0 {
        out = [-out[0], -out[1], -out[2]];
    }
    // avoid negative zeros so equal points print and compare identically
    out.map(|c| if c == 0.0 { 0.0 } else { c })
}

/// A point of the real projective plane, `(x : y : w)`.
///
/// Finite points have `w > 0` after normalization; `w = 0` marks a point at
/// infinity, i.e. a direction.
#[derive(Clone, Copy, PartialEq)]
pub struct HPoint {
    v: [Scalar; 3],
}

impl HPoint {
    pub fn new(x: Scalar, y: Scalar, w: Scalar) -> Self {
        Self::from_coords([x, y, w])
    }

    pub fn from_coords(v: [Scalar; 3]) -> Self {
        Self {
            v: normalize(v, [2, 0, 1]),
        }
    }

    pub fn finite(x: Scalar, y: Scalar) -> Self {
        Self::new(x, y, 1.0)
    }

    /// The point at infinity in direction `(dx, dy)`.
    pub fn at_infinity(dx: Scalar, dy: Scalar) -> Self {
        Self::new(dx, dy, 0.0)
    }

    pub fn coords(&self) -> [Scalar; 3] {
        self.v
    }

    /// False only for the all-zero triple, which does not name a point.
    pub fn is_valid(&self) -> bool {
        max_abs3(self.v) > 0.0 && self.v.iter().all(|c| c.is_finite())
    }

    pub fn is_finite(&self) -> bool {
        self.v[2].abs() > EPS_INCIDENCE
    }

    pub fn is_at_infinity(&self) -> bool {
        !self.is_finite()
    }

    /// Affine coordinates, or `None` for a point at infinity.
    pub fn affine(&self) -> Option<[Scalar; 2]> {
        self.is_finite().then(|| [self.v[0] / self.v[2], self.v[1] / self.v[2]])
    }

    /// Affine coordinates; panics on points at infinity.
    pub fn xy(&self) -> [Scalar; 2] {
        self.affine().expect("point at infinity has no affine coordinates")
    }

    /// Euclidean distance between two finite points.
    pub fn distance(&self, other: &HPoint) -> Option<Scalar> {
        let a = self.affine()?;
        let b = other.affine()?;
        Some((a[0] - b[0]).hypot(a[1] - b[1]))
    }

    /// Line through two points.
    pub fn join(&self, other: &HPoint) -> HLine {
        HLine::from_coords(cross3(self.v, other.v))
    }

    /// Distance between normalized representatives, sign-insensitive.
    pub fn projective_distance(&self, other: &HPoint) -> Scalar {
        let a = self.v;
        let b = other.v;
        let plus = max_abs3([a[0] - b[0], a[1] - b[1], a[2] - b[2]]);
        let minus = max_abs3([a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &HPoint, eps: Scalar) -> bool {
        self.projective_distance(other) <= eps
    }

    pub fn coincides(&self, other: &HPoint) -> bool {
        max_abs3(cross3(self.v, other.v)) <= EPS_INCIDENCE
    }
}

impl fmt::Debug for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine() {
            Some([x, y]) => write!(f, "HPoint({x}, {y})"),
            None => write!(f, "HPoint({}, {}, 0)", self.v[0], self.v[1]),
        }
    }
}

/// A line `a x + b y + c w = 0`. `(0, 0, 1)` is the line at infinity.
#[derive(Clone, Copy, PartialEq)]
pub struct HLine {
    v: [Scalar; 3],
}

impl HLine {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Self {
        Self::from_coords([a, b, c])
    }

    pub fn from_coords(v: [Scalar; 3]) -> Self {
        Self {
            v: normalize(v, [0, 1, 2]),
        }
    }

    pub fn at_infinity() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    pub fn through(p: &HPoint, q: &HPoint) -> Self {
        p.join(q)
    }

    pub fn coords(&self) -> [Scalar; 3] {
        self.v
    }

    pub fn is_valid(&self) -> bool {
        max_abs3(self.v) > 0.0 && self.v.iter().all(|c| c.is_finite())
    }

    pub fn is_at_infinity(&self) -> bool {
        self.v[0].abs() <= EPS_INCIDENCE && self.v[1].abs() <= EPS_INCIDENCE
    }

    /// Signed incidence residual of a point (both sides normalized).
    pub fn eval(&self, p: &HPoint) -> Scalar {
        dot3(self.v, p.coords())
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.eval(p).abs() <= EPS_INCIDENCE
    }

    /// Intersection point; the zero triple when the lines coincide.
    pub fn meet(&self, other: &HLine) -> HPoint {
        HPoint::from_coords(cross3(self.v, other.v))
    }

    /// Unit direction, oriented to point right, or up for vertical lines.
    pub fn direction(&self) -> Option<[Scalar; 2]> {
        if self.is_at_infinity() {
            return None;
        }
        let [a, b, _] = self.v;
        let n = a.hypot(b);
        let (mut dx, mut dy) = (b / n, -a / n);
        if dx < -EPS_INCIDENCE || (dx.abs() <= EPS_INCIDENCE && dy < 0.0) {
            dx = -dx;
            dy = -dy;
        }
        Some([dx, dy])
    }

    /// The point at infinity of this line.
    pub fn point_at_infinity(&self) -> HPoint {
        HPoint::new(self.v[1], -self.v[0], 0.0)
    }

    /// Foot of the perpendicular from the origin.
    pub fn foot_from_origin(&self) -> Option<[Scalar; 2]> {
        if self.is_at_infinity() {
            return None;
        }
        let [a, b, c] = self.v;
        let n2 = a * a + b * b;
        Some([-c * a / n2, -c * b / n2])
    }

    /// Signed Euclidean distance from a finite point.
    pub fn signed_distance(&self, p: [Scalar; 2]) -> Option<Scalar> {
        if self.is_at_infinity() {
            return None;
        }
        let [a, b, c] = self.v;
        Some((a * p[0] + b * p[1] + c) / a.hypot(b))
    }

    /// Parallel line through `p`.
    pub fn parallel_through(&self, p: &HPoint) -> HLine {
        let [a, b, _] = self.v;
        let [x, y, w] = p.coords();
        HLine::new(a * w, b * w, -(a * x + b * y))
    }

    /// Perpendicular line through `p`.
    pub fn perpendicular_through(&self, p: &HPoint) -> HLine {
        let [a, b, _] = self.v;
        p.join(&HPoint::new(a, b, 0.0))
    }
}

impl fmt::Debug for HLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HLine({}, {}, {})", self.v[0], self.v[1], self.v[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_max_abs_one() {
        let p = HPoint::new(4.0, -2.0, 2.0);
        assert_eq!(p.coords(), [1.0, -0.5, 0.5]);
        assert_eq!(p.xy(), [2.0, -1.0]);
        let q = HPoint::new(-4.0, 2.0, -2.0);
        assert_eq!(p, q);
    }

    #[test]
    fn direction_points_right_or_up() {
        assert_eq!(HLine::new(0.0, 1.0, 0.0).direction(), Some([1.0, 0.0]));
        assert_eq!(HLine::new(1.0, 0.0, -1.0).direction(), Some([0.0, 1.0]));
        assert_eq!(HLine::at_infinity().direction(), None);
    }

    #[test]
    fn parallel_and_perpendicular() {
        let l = HLine::new(1.0, 1.0, 0.0);
        let p = HPoint::finite(1.0, 0.0);
        let par = l.parallel_through(&p);
        assert!(par.contains(&p));
        assert!(l.meet(&par).is_at_infinity());
        let perp = l.perpendicular_through(&p);
        assert!(perp.contains(&p));
        let [a, b, _] = perp.coords();
        assert!((a - b).abs() > 0.5);
    }
}
