use nalgebra::Vector3;

use crate::geom::{intersect, Circle, Conic, Curve, HLine, HPoint, Scalar, EPS_INCIDENCE};

use super::TransformError;

/// The conic conjugate to `c` with respect to chords of direction `dir`.
///
/// In the frame made of the diameter conjugate to `dir` and `dir` itself the
/// conic reads `y² = p(r − x)(r + x)`; the conjugate flips the sign of the
/// `y²` term. In matrix form `M' = M − 2 (M d)(M d)ᵀ / (dᵀ M d)`.
pub fn conjugate_conic(c: &Conic, dir: [Scalar; 2]) -> Result<Conic, TransformError> {
    let m = c.matrix();
    let block = m.fixed_view::<2, 2>(0, 0);
    if block.determinant().abs() <= EPS_INCIDENCE * block.amax().powi(2).max(EPS_INCIDENCE) {
        return Err(TransformError::NoCenter);
    }
    let n = dir[0].hypot(dir[1]);
    if !(n > 0.0) {
        return Err(TransformError::DegenerateInput("zero direction"));
    }
    let d = Vector3::new(dir[0] / n, dir[1] / n, 0.0);
    let md = m * d;
    let q = d.dot(&md);
    if q.abs() <= EPS_INCIDENCE {
        return Err(TransformError::AsymptoticDirection);
    }
    Ok(Conic::from_matrix(m - md * md.transpose() * (2.0 / q)))
}

/// Real endpoints of the ideal chord of `c` carried by a line that misses it:
/// the meets of `l` with the conjugate conic for the direction of `l`.
///
/// A tangent line yields its point of contact twice.
pub fn ideal_chord(c: &Conic, l: &HLine) -> Result<(HPoint, HPoint), TransformError> {
    let dir = l.direction().ok_or(TransformError::LineAtInfinity)?;
    let real = intersect(&Curve::Line(*l), &Curve::Conic(*c))?;
    if real.tangent {
        return Ok((real.points[0], real.points[0]));
    }
    if !real.points.is_empty() {
        return Err(TransformError::RealSecant);
    }
    let conj = conjugate_conic(c, dir)?;
    let ideal = intersect(&Curve::Line(*l), &Curve::Conic(conj))?;
    match ideal.points.as_slice() {
        [p, q] => Ok((*p, *q)),
        [p] => Ok((*p, *p)),
        _ => Err(TransformError::NoIntersection),
    }
}

/// Radical axis of two circles: their real common secant when they meet,
/// the ideal one otherwise.
pub fn ideal_common_secant(c1: &Circle, c2: &Circle) -> Result<HLine, TransformError> {
    let (dx, dy) = (c2.cx - c1.cx, c2.cy - c1.cy);
    if dx.hypot(dy) <= EPS_INCIDENCE * c1.r.max(c2.r) {
        return Err(TransformError::ConcentricCircles);
    }
    let k1 = c1.cx * c1.cx + c1.cy * c1.cy - c1.r * c1.r;
    let k2 = c2.cx * c2.cx + c2.cy * c2.cy - c2.r * c2.r;
    Ok(HLine::new(2.0 * dx, 2.0 * dy, k1 - k2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit() -> Conic {
        Circle::new(0.0, 0.0, 1.0).unwrap().to_conic()
    }

    #[test]
    fn unit_circle_conjugate_is_rectangular_hyperbola() {
        let h = conjugate_conic(&unit(), [0.0, 1.0]).unwrap();
        let expected = Conic::from_coeffs(1.0, 0.0, -1.0, 0.0, 0.0, -1.0);
        assert_eq!(h.distance(&expected), 0.0);
        let back = conjugate_conic(&h, [0.0, 1.0]).unwrap();
        assert_eq!(back.distance(&unit()), 0.0);
    }

    #[test]
    fn ellipse_conjugate() {
        let e = Conic::from_coeffs(0.25, 0.0, 1.0, 0.0, 0.0, -1.0);
        let h = conjugate_conic(&e, [0.0, 1.0]).unwrap();
        let expected = Conic::from_coeffs(0.25, 0.0, -1.0, 0.0, 0.0, -1.0);
        assert!(h.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn conjugate_errors() {
        let parabola = Conic::from_coeffs(1.0, 0.0, 0.0, 0.0, -1.0, 0.0);
        assert_eq!(conjugate_conic(&parabola, [0.0, 1.0]), Err(TransformError::NoCenter));
        let h = Conic::from_coeffs(1.0, 0.0, -1.0, 0.0, 0.0, -1.0);
        assert_eq!(
            conjugate_conic(&h, [1.0, 1.0]),
            Err(TransformError::AsymptoticDirection)
        );
    }

    #[test]
    fn chord_examples() {
        let (p, q) = ideal_chord(&unit(), &HLine::new(1.0, 0.0, -2.0)).unwrap();
        assert_abs_diff_eq!(p.xy()[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.xy()[1], -(3f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(q.xy()[1], 3f64.sqrt(), epsilon = 1e-12);
        let (p, q) = ideal_chord(&unit(), &HLine::new(0.0, 1.0, -1.0)).unwrap();
        assert_eq!(p, q);
        assert_eq!(
            ideal_chord(&unit(), &HLine::new(1.0, 0.0, -0.5)),
            Err(TransformError::RealSecant)
        );
    }

    #[test]
    fn radical_axis_examples() {
        let c1 = Circle::new(0.0, 0.0, 1.0).unwrap();
        let c2 = Circle::new(3.0, 0.0, 1.0).unwrap();
        let l = ideal_common_secant(&c1, &c2).unwrap();
        assert!(l.contains(&HPoint::finite(1.5, 10.0)));
        assert!(l.contains(&HPoint::finite(1.5, -3.0)));
        let c3 = Circle::new(1.0, 0.0, 1.0).unwrap();
        let l = ideal_common_secant(&c1, &c3).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!(l.contains(&HPoint::finite(0.5, h)) && l.contains(&HPoint::finite(0.5, -h)));
        assert_eq!(
            ideal_common_secant(&c1, &Circle::new(0.0, 0.0, 2.0).unwrap()),
            Err(TransformError::ConcentricCircles)
        );
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(
            a in 0.2..4.0f64, c in -4.0..4.0f64, b in -1.0..1.0f64,
            shift in prop::array::uniform2(-2.0..2.0f64),
            angle in 0.0..std::f64::consts::PI,
        ) {
            prop_assume!((a * c - b * b / 4.0).abs() > 1e-2);
            let (x0, y0) = (shift[0], shift[1]);
            let k = Conic::from_coeffs(
                a, b, c,
                -2.0 * a * x0 - b * y0, -2.0 * c * y0 - b * x0,
                a * x0 * x0 + b * x0 * y0 + c * y0 * y0 - 1.0,
            );
            let dir = [angle.cos(), angle.sin()];
            let q = a * dir[0] * dir[0] + b * dir[0] * dir[1] + c * dir[1] * dir[1];
            prop_assume!(q.abs() > 1e-2);
            let once = conjugate_conic(&k, dir).unwrap();
            let twice = conjugate_conic(&once, dir).unwrap();
            prop_assert!(twice.approx_eq(&k, 1e-9));
        }
    }
}
