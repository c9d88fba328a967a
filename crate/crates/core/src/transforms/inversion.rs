use crate::geom::{Circle, GenCircle, HLine, HPoint, EPS_INCIDENCE};

use super::TransformError;

/// Inverse of `p` in circle `c`. Points at infinity map to the center.
pub fn invert_point(c: &Circle, p: &HPoint) -> Result<HPoint, TransformError> {
    let Some([x, y]) = p.affine() else {
        return Ok(c.center());
    };
    let (dx, dy) = (x - c.cx, y - c.cy);
    let d2 = dx * dx + dy * dy;
    if d2.sqrt() <= EPS_INCIDENCE * c.r {
        return Err(TransformError::CenterInversion);
    }
    let k = c.r * c.r / d2;
    Ok(HPoint::finite(c.cx + k * dx, c.cy + k * dy))
}

/// Image of a circle or line under inversion in `c`.
///
/// Lines through the center are fixed; other lines become circles through
/// the center and vice versa. The line at infinity has no such image.
pub fn invert_gencircle(c: &Circle, g: &GenCircle) -> Result<GenCircle, TransformError> {
    match g {
        GenCircle::Line(l) => invert_line(c, l),
        GenCircle::Circle(k) => invert_circle(c, k),
    }
}

fn invert_line(c: &Circle, l: &HLine) -> Result<GenCircle, TransformError> {
    let dist = l.signed_distance(c.center_xy()).ok_or(TransformError::LineAtInfinity)?;
    if dist.abs() <= EPS_INCIDENCE * c.r {
        return Ok(GenCircle::Line(*l));
    }
    let [a, b, _] = l.coords();
    let n = a.hypot(b);
    let foot = HPoint::finite(c.cx - dist * a / n, c.cy - dist * b / n);
    let [fx, fy] = invert_point(c, &foot)?.xy();
    let circle = Circle::new((c.cx + fx) / 2.0, (c.cy + fy) / 2.0, (fx - c.cx).hypot(fy - c.cy) / 2.0)?;
    Ok(GenCircle::Circle(circle))
}

fn invert_circle(c: &Circle, k: &Circle) -> Result<GenCircle, TransformError> {
    let (gx, gy) = (k.cx - c.cx, k.cy - c.cy);
    let delta = gx.hypot(gy);
    let scale = k.r.max(c.r);
    if delta <= EPS_INCIDENCE * scale {
        return Ok(GenCircle::Circle(Circle::new(c.cx, c.cy, c.r * c.r / k.r)?));
    }
    let (ux, uy) = (gx / delta, gy / delta);
    if (delta - k.r).abs() <= EPS_INCIDENCE * scale {
        // through the center: the antipode of the center fixes the image line
        let antipode = HPoint::finite(c.cx + 2.0 * gx, c.cy + 2.0 * gy);
        let [x, y] = invert_point(c, &antipode)?.xy();
        return Ok(GenCircle::Line(HLine::new(ux, uy, -(ux * x + uy * y))));
    }
    // signed distances of the diameter endpoints on the line through both centers
    let r2 = c.r * c.r;
    let near = r2 / (delta - k.r);
    let far = r2 / (delta + k.r);
    let mid = (near + far) / 2.0;
    let circle = Circle::new(c.cx + mid * ux, c.cy + mid * uy, (near - far).abs() / 2.0)?;
    Ok(GenCircle::Circle(circle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> Circle {
        Circle::new(0.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn point_examples() {
        let p = invert_point(&unit(), &HPoint::finite(2.0, 0.0)).unwrap();
        assert_eq!(p.xy(), [0.5, 0.0]);
        let q = HPoint::finite(0.6, 0.8);
        assert!(invert_point(&unit(), &q).unwrap().approx_eq(&q, 1e-15));
        assert_eq!(
            invert_point(&unit(), &HPoint::finite(0.0, 0.0)),
            Err(TransformError::CenterInversion)
        );
        let inf = invert_point(&unit(), &HPoint::at_infinity(1.0, 1.0)).unwrap();
        assert_eq!(inf.xy(), [0.0, 0.0]);
    }

    #[test]
    fn circle_through_center_becomes_line() {
        let k = Circle::new(1.0, 0.0, 1.0).unwrap();
        let img = invert_gencircle(&unit(), &GenCircle::Circle(k)).unwrap();
        let l = img.as_line().unwrap();
        assert!(l.contains(&HPoint::finite(0.5, 3.0)));
        assert!(l.contains(&HPoint::finite(0.5, -1.0)));
        let back = invert_gencircle(&unit(), &img).unwrap();
        let c = back.as_circle().unwrap();
        assert_abs_diff_eq!(c.cx, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.cy, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.r, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn orthogonal_circle_is_fixed() {
        let k = Circle::new(1.25, 0.0, 0.75).unwrap();
        let img = invert_gencircle(&unit(), &GenCircle::Circle(k)).unwrap();
        let c = img.as_circle().unwrap();
        assert_abs_diff_eq!(c.cx, 1.25, epsilon = 1e-12);
        assert_abs_diff_eq!(c.r, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn circle_around_center() {
        // center inside the circle: the image circle also surrounds the center
        let k = Circle::new(0.5, 0.0, 2.0).unwrap();
        let img = *invert_gencircle(&unit(), &GenCircle::Circle(k))
            .unwrap()
            .as_circle()
            .unwrap();
        for t in [0.0, 1.0, 2.5, 4.0] {
            let p = k.point_at(t);
            assert!(img.contains(&invert_point(&unit(), &p).unwrap()));
        }
    }

    #[test]
    fn lines_through_center_are_fixed() {
        let l = HLine::new(1.0, 2.0, 0.0);
        assert_eq!(
            invert_gencircle(&unit(), &GenCircle::Line(l)).unwrap(),
            GenCircle::Line(l)
        );
        assert_eq!(
            invert_gencircle(&unit(), &GenCircle::Line(HLine::at_infinity())),
            Err(TransformError::LineAtInfinity)
        );
    }
}
