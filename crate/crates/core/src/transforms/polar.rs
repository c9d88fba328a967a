use nalgebra::Vector3;

use crate::geom::{Circle, Conic, GeomError, HLine, HPoint};

use super::{invert_point, TransformError};

/// Polar line `M P` of a point with respect to a nonsingular conic.
pub fn polar(c: &Conic, p: &HPoint) -> Result<HLine, TransformError> {
    if c.rank() < 3 {
        return Err(TransformError::SingularConic);
    }
    Ok(c.polar_of(p))
}

/// Pole `M⁻¹ l` of a line.
pub fn pole(c: &Conic, l: &HLine) -> Result<HPoint, TransformError> {
    let inv = c.inverse().map_err(|_| TransformError::SingularConic)?;
    Ok(HPoint::from_coords((inv * Vector3::from(l.coords())).into()))
}

/// Fourth harmonic point `D` with `(A, B; C, D) = −1`.
///
/// For finite `A`, `B` this is the inverse of `C` in the circle with
/// diameter `AB`; the midpoint goes to the point at infinity of the line.
pub fn harmonic_conjugate(a: &HPoint, b: &HPoint, c: &HPoint) -> Result<HPoint, TransformError> {
    if a.coincides(b) {
        return Err(TransformError::DegenerateInput("A and B coincide"));
    }
    if c.coincides(a) || c.coincides(b) {
        return Err(TransformError::DegenerateInput("C coincides with A or B"));
    }
    let ab = a.join(b);
    if !ab.contains(c) {
        return Err(GeomError::NotCollinear.into());
    }
    match (a.affine(), b.affine()) {
        (Some(pa), Some(pb)) => {
            let mid = HPoint::finite((pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0);
            let circle = Circle::through(&mid, a)?;
            match invert_point(&circle, c) {
                Err(TransformError::CenterInversion) => Ok(ab.point_at_infinity()),
                other => other,
            }
        }
        _ => {
            // write C = αA + βB; then D = αA − βB
            let (av, bv, cv) = (
                Vector3::from(a.coords()),
                Vector3::from(b.coords()),
                Vector3::from(c.coords()),
            );
            let n = av.cross(&bv);
            let n2 = n.norm_squared();
            let alpha = cv.cross(&bv).dot(&n) / n2;
            let beta = av.cross(&cv).dot(&n) / n2;
            Ok(HPoint::from_coords((av * alpha - bv * beta).into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{cross_ratio, EPS_INCIDENCE};
    use crate::geom::{intersect, Curve};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Checks `(A, B; C, D) = −1` within `tol`.
    fn is_harmonic(a: &HPoint, b: &HPoint, c: &HPoint, d: &HPoint, tol: f64) -> bool {
        cross_ratio(a, b, c, d).is_ok_and(|v| (v + 1.0).abs() <= tol.max(EPS_INCIDENCE))
    }

    fn x(t: f64) -> HPoint {
        HPoint::finite(t, 0.0)
    }

    #[test]
    fn polar_examples() {
        let unit = Circle::new(0.0, 0.0, 1.0).unwrap().to_conic();
        let l = polar(&unit, &x(2.0)).unwrap();
        assert!(l.contains(&HPoint::finite(0.5, 7.0)));
        assert!(polar(&unit, &x(0.0)).unwrap().is_at_infinity());
        let p = HPoint::finite(0.6, 0.8);
        assert_eq!(
            polar(&unit, &p).unwrap(),
            crate::geom::tangent_direction(&unit, &p).unwrap()
        );
        assert!(pole(&unit, &l).unwrap().approx_eq(&x(2.0), 1e-15));
        let pair = Conic::line_pair(&HLine::new(1.0, 0.0, 0.0), &HLine::new(0.0, 1.0, 0.0));
        assert_eq!(polar(&pair, &x(1.0)), Err(TransformError::SingularConic));
    }

    #[test]
    fn harmonic_examples() {
        let d = harmonic_conjugate(&x(0.0), &x(1.0), &x(0.5)).unwrap();
        assert!(d.is_at_infinity());
        let d = harmonic_conjugate(&x(0.0), &x(1.0), &x(1.0 / 3.0)).unwrap();
        assert_abs_diff_eq!(d.xy()[0], -1.0, epsilon = 1e-15);
        let d = harmonic_conjugate(&x(0.0), &x(1.0), &x(2.0)).unwrap();
        assert_abs_diff_eq!(d.xy()[0], 2.0 / 3.0, epsilon = 1e-15);
        let inf = HPoint::at_infinity(1.0, 0.0);
        let d = harmonic_conjugate(&x(0.0), &inf, &x(1.0)).unwrap();
        assert_abs_diff_eq!(d.xy()[0], -1.0, epsilon = 1e-15);
        assert!(matches!(
            harmonic_conjugate(&x(0.0), &x(1.0), &HPoint::finite(0.5, 1.0)),
            Err(TransformError::Geom(GeomError::NotCollinear))
        ));
    }

    proptest! {
        #[test]
        fn polar_is_harmonic_locus(
            coeffs in prop::array::uniform2(0.2..3.0f64),
            center in prop::array::uniform2(-2.0..2.0f64),
            p in prop::array::uniform2(-6.0..6.0f64),
            angle in 0.0..std::f64::consts::TAU,
        ) {
            let ellipse = Conic::from_coeffs(
                coeffs[0], 0.0, coeffs[1],
                -2.0 * coeffs[0] * center[0], -2.0 * coeffs[1] * center[1],
                coeffs[0] * center[0] * center[0] + coeffs[1] * center[1] * center[1] - 1.0,
            );
            let pp = HPoint::finite(p[0], p[1]);
            prop_assume!(ellipse.eval(&pp).abs() > 1e-3);
            // aim the secant at a point of the ellipse so it always meets it
            let target = HPoint::finite(
                center[0] + angle.cos() / coeffs[0].sqrt(),
                center[1] + angle.sin() / coeffs[1].sqrt(),
            );
            let secant = pp.join(&target);
            let meets = intersect(&Curve::Line(secant), &Curve::Conic(ellipse)).unwrap();
            prop_assume!(meets.points.len() == 2 && !meets.tangent);
            let (a, b) = (meets.points[0], meets.points[1]);
            prop_assume!(!a.coincides(&pp) && !b.coincides(&pp));
            prop_assume!(a.distance(&b).unwrap() > 1e-3);
            let q = secant.meet(&polar(&ellipse, &pp).unwrap());
            prop_assert!(is_harmonic(&a, &b, &pp, &q, 1e-8));
        }
    }
}
