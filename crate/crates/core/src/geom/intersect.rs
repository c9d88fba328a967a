use nalgebra::Vector3;

use super::{cross3, max_abs3, Circle, Conic, GeomError, HLine, HPoint, Scalar, EPS_INCIDENCE};

/// Operand of [`intersect`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    Line(HLine),
    Circle(Circle),
    Conic(Conic),
}

impl Curve {
    pub fn contains(&self, p: &HPoint) -> bool {
        match self {
            Curve::Line(l) => l.contains(p),
            Curve::Circle(c) => c.contains(p),
            Curve::Conic(k) => k.contains(p),
        }
    }
}

impl From<HLine> for Curve {
    fn from(l: HLine) -> Self {
        Curve::Line(l)
    }
}

impl From<Circle> for Curve {
    fn from(c: Circle) -> Self {
        Curve::Circle(c)
    }
}

impl From<Conic> for Curve {
    fn from(k: Conic) -> Self {
        Curve::Conic(k)
    }
}

/// Common points of two curves.
///
/// `tangent` is set when the two solutions merged into one double point; in
/// that case `points` has a single entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    pub points: Vec<HPoint>,
    pub tangent: bool,
}

impl Intersection {
    fn empty() -> Self {
        Self {
            points: Vec::new(),
            tangent: false,
        }
    }

    fn double(p: HPoint) -> Self {
        Self {
            points: vec![p],
            tangent: true,
        }
    }

    fn simple(points: Vec<HPoint>) -> Self {
        Self { points, tangent: false }
    }
}

/// Intersects two curves. At least one operand must be a line or a circle,
/// and a circle is only intersected with lines and circles.
///
/// Points are ordered along the first operand: by the canonical direction
/// parameter for a line (points at infinity last), by counterclockwise angle
/// from +x about the center for a circle. A conic first operand defers to the
/// line's ordering.
pub fn intersect(a: &Curve, b: &Curve) -> Result<Intersection, GeomError> {
    match (a, b) {
        (Curve::Line(l), Curve::Line(m)) => line_line(l, m),
        (Curve::Line(l), Curve::Circle(c)) => Ok(line_circle(l, c)),
        (Curve::Circle(c), Curve::Line(l)) => {
            let mut out = line_circle(l, c);
            sort_by_angle(&mut out.points, c);
            Ok(out)
        }
        (Curve::Circle(c), Curve::Circle(d)) => circle_circle(c, d),
        (Curve::Line(l), Curve::Conic(k)) | (Curve::Conic(k), Curve::Line(l)) => line_conic(l, k),
        _ => Err(GeomError::Unsupported(
            "intersection of a conic with a circle or another conic",
        )),
    }
}

fn line_line(l: &HLine, m: &HLine) -> Result<Intersection, GeomError> {
    let p = cross3(l.coords(), m.coords());
    if max_abs3(p) <= EPS_INCIDENCE {
        return Err(GeomError::CoincidentObjects);
    }
    Ok(Intersection::simple(vec![HPoint::from_coords(p)]))
}

fn line_circle(l: &HLine, c: &Circle) -> Intersection {
    let (Some(foot0), Some(dir)) = (l.foot_from_origin(), l.direction()) else {
        return Intersection::empty();
    };
    // project the center onto the line
    let t0 = (c.cx - foot0[0]) * dir[0] + (c.cy - foot0[1]) * dir[1];
    let f = [foot0[0] + t0 * dir[0], foot0[1] + t0 * dir[1]];
    let s2 = (c.cx - f[0]).powi(2) + (c.cy - f[1]).powi(2);
    let r2 = c.r * c.r;
    let delta = (r2 - s2) / r2;
    if delta < -EPS_INCIDENCE {
        Intersection::empty()
    } else if delta <= EPS_INCIDENCE {
        Intersection::double(HPoint::finite(f[0], f[1]))
    } else {
        let h = (r2 - s2).sqrt();
        Intersection::simple(vec![
            HPoint::finite(f[0] - h * dir[0], f[1] - h * dir[1]),
            HPoint::finite(f[0] + h * dir[0], f[1] + h * dir[1]),
        ])
    }
}

fn circle_circle(c: &Circle, d: &Circle) -> Result<Intersection, GeomError> {
    let dx = d.cx - c.cx;
    let dy = d.cy - c.cy;
    let dist = dx.hypot(dy);
    let scale = c.r.max(d.r);
    if dist <= EPS_INCIDENCE * scale {
        if (c.r - d.r).abs() <= EPS_INCIDENCE * scale {
            return Err(GeomError::CoincidentObjects);
        }
        return Ok(Intersection::empty());
    }
    let a = (dist * dist + c.r * c.r - d.r * d.r) / (2.0 * dist);
    let h2 = c.r * c.r - a * a;
    let rel = h2 / (c.r * c.r);
    let (ux, uy) = (dx / dist, dy / dist);
    let base = [c.cx + a * ux, c.cy + a * uy];
    if rel < -EPS_INCIDENCE {
        return Ok(Intersection::empty());
    }
    if rel <= EPS_INCIDENCE {
        return Ok(Intersection::double(HPoint::finite(base[0], base[1])));
    }
    let h = h2.sqrt();
    let mut pts = vec![
        HPoint::finite(base[0] - h * uy, base[1] + h * ux),
        HPoint::finite(base[0] + h * uy, base[1] - h * ux),
    ];
    sort_by_angle(&mut pts, c);
    Ok(Intersection::simple(pts))
}

fn line_conic(l: &HLine, k: &Conic) -> Result<Intersection, GeomError> {
    // parametrize the line as s·p0 + t·d
    let (p0, d) = match (l.foot_from_origin(), l.direction()) {
        (Some(f), Some(dir)) => (
            Vector3::from(HPoint::finite(f[0], f[1]).coords()),
            Vector3::new(dir[0], dir[1], 0.0),
        ),
        _ => (Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 0.0)),
    };
    let m = k.matrix();
    let a = d.dot(&(m * d));
    let b = d.dot(&(m * p0));
    let c = p0.dot(&(m * p0));
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale <= EPS_INCIDENCE {
        return Err(GeomError::CoincidentObjects);
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    let disc = b * b - a * c;
    let at = |t: Scalar, s: Scalar| HPoint::from_coords((p0 * s + d * t).into());
    if disc < -EPS_INCIDENCE * (b * b).max((a * c).abs()).max(EPS_INCIDENCE) {
        return Ok(Intersection::empty());
    }
    let tangent = disc.abs() <= EPS_INCIDENCE * (b * b).max((a * c).abs()).max(EPS_INCIDENCE);
    // roots (t : s) of a t² + 2 b t s + c s², ordered by t/s with s = 0 last
    let mut roots: Vec<(Scalar, Scalar)> = if a.abs() <= EPS_INCIDENCE {
        if b.abs() <= EPS_INCIDENCE {
            return Ok(Intersection::double(at(1.0, 0.0)));
        }
        vec![(-c, 2.0 * b), (1.0, 0.0)]
    } else if tangent {
        return Ok(Intersection::double(at(-b, a)));
    } else {
        let sq = disc.sqrt();
        let q = -(b + b.signum() * sq);
        if q == 0.0 {
            vec![(sq, a), (-sq, a)]
        } else {
            vec![(q, a), (c, q)]
        }
    };
    for r in roots.iter_mut() {
        if r.1 < 0.0 {
            *r = (-r.0, -r.1);
        }
    }
    roots.sort_by(|x, y| {
        let kx = if x.1 == 0.0 { Scalar::INFINITY } else { x.0 / x.1 };
        let ky = if y.1 == 0.0 { Scalar::INFINITY } else { y.0 / y.1 };
        kx.total_cmp(&ky)
    });
    Ok(Intersection::simple(roots.into_iter().map(|(t, s)| at(t, s)).collect()))
}

fn sort_by_angle(pts: &mut [HPoint], c: &Circle) {
    pts.sort_by(|p, q| {
        let ap = p.affine().map_or(Scalar::INFINITY, |x| c.angle_of(x));
        let aq = q.affine().map_or(Scalar::INFINITY, |x| c.angle_of(x));
        ap.total_cmp(&aq)
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit(cx: Scalar, cy: Scalar) -> Curve {
        Curve::Circle(Circle::new(cx, cy, 1.0).unwrap())
    }

    #[test]
    fn two_unit_circles() {
        let out = intersect(&unit(0.0, 0.0), &unit(1.0, 0.0)).unwrap();
        assert!(!out.tangent);
        let h = 3f64.sqrt() / 2.0;
        assert_abs_diff_eq!(out.points[0].xy()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.points[0].xy()[1], h, epsilon = 1e-15);
        assert_abs_diff_eq!(out.points[1].xy()[1], -h, epsilon = 1e-15);
    }

    #[test]
    fn lines_and_parallels() {
        let x0 = Curve::Line(HLine::new(1.0, 0.0, 0.0));
        let y0 = Curve::Line(HLine::new(0.0, 1.0, 0.0));
        let x1 = Curve::Line(HLine::new(1.0, 0.0, -1.0));
        assert_eq!(intersect(&x0, &y0).unwrap().points[0].xy(), [0.0, 0.0]);
        assert_eq!(intersect(&x0, &x1).unwrap().points[0].coords(), [0.0, 1.0, 0.0]);
        assert_eq!(intersect(&x0, &x0), Err(GeomError::CoincidentObjects));
    }

    #[test]
    fn line_and_ellipse() {
        let ellipse = Curve::Conic(Conic::from_coeffs(0.25, 0.0, 1.0, 0.0, 0.0, -1.0));
        let axis = Curve::Line(HLine::new(0.0, 1.0, 0.0));
        let out = intersect(&axis, &ellipse).unwrap();
        assert_eq!(out.points.len(), 2);
        assert_abs_diff_eq!(out.points[0].xy()[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.points[1].xy()[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn tangent_line_gives_double_point() {
        let c = Circle::new(0.0, 0.0, 1.0).unwrap();
        let out = intersect(&Curve::Line(HLine::new(1.0, 0.0, -1.0)), &Curve::Circle(c)).unwrap();
        assert!(out.tangent);
        assert_eq!(out.points.len(), 1);
        let out = intersect(&unit(0.0, 0.0), &unit(2.0, 0.0)).unwrap();
        assert!(out.tangent);
        assert_abs_diff_eq!(out.points[0].xy()[0], 1.0, epsilon = 1e-15);
        let k = Curve::Conic(c.to_conic());
        let out = intersect(&Curve::Line(HLine::new(0.0, 1.0, -1.0)), &k).unwrap();
        assert!(out.tangent);
        assert_abs_diff_eq!(out.points[0].xy()[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hyperbola_asymptote_meets_at_infinity() {
        // x² − y² = 1 and the line y = x − 1 through a vertex, parallel to an asymptote
        let h = Curve::Conic(Conic::from_coeffs(1.0, 0.0, -1.0, 0.0, 0.0, -1.0));
        let l = Curve::Line(HLine::new(1.0, -1.0, -1.0));
        let out = intersect(&l, &h).unwrap();
        assert_eq!(out.points.len(), 2);
        assert_abs_diff_eq!(out.points[0].xy()[0], 1.0, epsilon = 1e-12);
        assert!(out.points[1].is_at_infinity());
    }

    #[test]
    fn disjoint_and_concentric() {
        assert!(intersect(&unit(0.0, 0.0), &unit(3.0, 0.0)).unwrap().points.is_empty());
        let small = Curve::Circle(Circle::new(0.0, 0.0, 0.5).unwrap());
        assert!(intersect(&unit(0.0, 0.0), &small).unwrap().points.is_empty());
        assert_eq!(
            intersect(&unit(0.0, 0.0), &unit(0.0, 0.0)),
            Err(GeomError::CoincidentObjects)
        );
    }

    #[test]
    fn ordering_follows_first_operand() {
        let c = Circle::new(0.0, 0.0, 1.0).unwrap();
        let l = HLine::new(1.0, 1.0, 0.0); // x + y = 0, direction (1, -1)/√2 after orientation
        let along = intersect(&Curve::Line(l), &Curve::Circle(c)).unwrap();
        assert!(along.points[0].xy()[0] < 0.0);
        let around = intersect(&Curve::Circle(c), &Curve::Line(l)).unwrap();
        assert!(around.points[0].xy()[0] < 0.0 && around.points[0].xy()[1] > 0.0);
    }

    fn residual(curve: &Curve, p: &HPoint) -> Scalar {
        match curve {
            Curve::Line(l) => l.eval(p).abs(),
            Curve::Circle(c) => {
                let [x, y] = p.xy();
                ((x - c.cx).hypot(y - c.cy) - c.r).abs() / c.r.max(1.0)
            }
            Curve::Conic(k) => k.eval(p).abs(),
        }
    }

    fn coord() -> impl Strategy<Value = Scalar> {
        -10.0..10.0f64
    }

    fn curve() -> impl Strategy<Value = Curve> {
        prop_oneof![
            (coord(), coord(), coord()).prop_filter_map("line", |(a, b, c)| {
                (a.hypot(b) > 1e-3).then(|| Curve::Line(HLine::new(a, b, c)))
            }),
            (coord(), coord(), 0.1..10.0f64).prop_map(|(x, y, r)| Curve::Circle(Circle::new(x, y, r).unwrap())),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn intersection_points_lie_on_both(a in curve(), b in curve()) {
            if let Ok(out) = intersect(&a, &b) {
                for p in &out.points {
                    prop_assert!(residual(&a, p) < EPS_INCIDENCE, "{a:?} {b:?} {p:?}");
                    prop_assert!(residual(&b, p) < EPS_INCIDENCE, "{a:?} {b:?} {p:?}");
                }
            }
        }
    }
}
