use super::{cross3, dot3, max_abs3, Circle, Conic, GeomError, HLine, HPoint, Scalar, EPS_INCIDENCE};

/// Cross ratio `(A, B; C, D)` of four collinear points, any of which may be
/// at infinity.
///
/// Each of `C` and `D` is written as `αA + βB` on the normalized
/// representatives and the ratio is `(β_C α_D) / (α_C β_D)`, which equals
/// `(c − a)(d − b) / ((c − b)(d − a))` in any affine parameter.
pub fn cross_ratio(a: &HPoint, b: &HPoint, c: &HPoint, d: &HPoint) -> Result<Scalar, GeomError> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].coincides(pts[j]) {
                return Err(GeomError::DegenerateQuadruple);
            }
        }
    }
    let (av, bv) = (a.coords(), b.coords());
    let ab = cross3(av, bv);
    let n2 = dot3(ab, ab);
    for p in [c, d] {
        if dot3(ab, p.coords()).abs() > EPS_INCIDENCE * n2.sqrt().max(1.0) {
            return Err(GeomError::NotCollinear);
        }
    }
    let split = |x: [Scalar; 3]| {
        let alpha = dot3(cross3(x, bv), ab) / n2;
        let beta = dot3(cross3(av, x), ab) / n2;
        (alpha, beta)
    };
    let (c0, c1) = split(c.coords());
    let (d0, d1) = split(d.coords());
    Ok((c1 * d0) / (c0 * d1))
}

/// Unsigned angle between two lines, in `[0, π/2]`.
pub fn angle_between(l1: &HLine, l2: &HLine) -> Result<Scalar, GeomError> {
    if l1.is_at_infinity() || l2.is_at_infinity() {
        return Err(GeomError::LineAtInfinity);
    }
    let [a1, b1, _] = l1.coords();
    let [a2, b2, _] = l2.coords();
    let cross = a1 * b2 - b1 * a2;
    let dot = a1 * a2 + b1 * b2;
    Ok(cross.abs().atan2(dot.abs()))
}

/// Operand of [`tangent_direction`].
#[derive(Debug, Clone, Copy)]
pub enum Smooth<'a> {
    Circle(&'a Circle),
    Conic(&'a Conic),
}

impl<'a> From<&'a Circle> for Smooth<'a> {
    fn from(c: &'a Circle) -> Self {
        Smooth::Circle(c)
    }
}

impl<'a> From<&'a Conic> for Smooth<'a> {
    fn from(k: &'a Conic) -> Self {
        Smooth::Conic(k)
    }
}

/// Tangent line at a point of a circle or conic: the polar `M p`.
pub fn tangent_direction<'a>(curve: impl Into<Smooth<'a>>, p: &HPoint) -> Result<HLine, GeomError> {
    let conic = match curve.into() {
        Smooth::Circle(c) => {
            if !c.contains(p) {
                return Err(GeomError::NotOnCurve);
            }
            c.to_conic()
        }
        Smooth::Conic(k) => {
            if !k.contains(p) {
                return Err(GeomError::NotOnCurve);
            }
            *k
        }
    };
    let l = conic.apply(p);
    if max_abs3(l) <= EPS_INCIDENCE {
        return Err(GeomError::SingularPoint);
    }
    Ok(HLine::from_coords(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::{Matrix3, Vector3};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn on_x(t: Scalar) -> HPoint {
        HPoint::finite(t, 0.0)
    }

    #[test]
    fn harmonic_examples() {
        let inf = HPoint::at_infinity(1.0, 0.0);
        let cr = cross_ratio(&on_x(0.0), &on_x(1.0), &on_x(0.5), &inf).unwrap();
        assert_abs_diff_eq!(cr, -1.0, epsilon = 1e-12);
        let cr = cross_ratio(&on_x(0.0), &on_x(1.0), &on_x(1.0 / 3.0), &on_x(-1.0)).unwrap();
        assert_abs_diff_eq!(cr, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn agrees_with_affine_formula() {
        let (a, b, c, d) = (0.3, -1.7, 2.5, 4.0);
        let expected = (c - a) * (d - b) / ((c - b) * (d - a));
        let got = cross_ratio(&on_x(a), &on_x(b), &on_x(c), &on_x(d)).unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-12);
    }

    #[test]
    fn cross_ratio_errors() {
        let p = on_x(0.0);
        assert_eq!(
            cross_ratio(&p, &on_x(1.0), &p, &on_x(2.0)),
            Err(GeomError::DegenerateQuadruple)
        );
        assert_eq!(
            cross_ratio(&p, &on_x(1.0), &on_x(2.0), &HPoint::finite(0.0, 1.0)),
            Err(GeomError::NotCollinear)
        );
    }

    #[test]
    fn angle_examples() {
        let x0 = HLine::new(1.0, 0.0, 0.0);
        let y0 = HLine::new(0.0, 1.0, 0.0);
        let diag = HLine::new(1.0, -1.0, 0.0);
        assert_abs_diff_eq!(angle_between(&x0, &y0).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(angle_between(&y0, &diag).unwrap(), FRAC_PI_4, epsilon = 1e-15);
        let l1 = HLine::new(3.0, 4.0, 0.0);
        let l2 = HLine::new(4.0, -3.0, 1.0);
        assert_abs_diff_eq!(angle_between(&l1, &l2).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(angle_between(&x0, &x0).unwrap(), 0.0);
        assert_eq!(
            angle_between(&x0, &HLine::at_infinity()),
            Err(GeomError::LineAtInfinity)
        );
    }

    #[test]
    fn tangent_examples() {
        let unit = Circle::new(0.0, 0.0, 1.0).unwrap();
        let t = tangent_direction(&unit, &HPoint::finite(1.0, 0.0)).unwrap();
        assert!(t.contains(&HPoint::finite(1.0, 5.0)));
        let t = tangent_direction(&unit, &HPoint::finite(0.6, 0.8)).unwrap();
        let expected = HLine::new(3.0, 4.0, -5.0);
        assert!(t
            .coords()
            .iter()
            .zip(expected.coords())
            .all(|(a, b)| (a - b).abs() < 1e-12));
        let ellipse = Conic::from_coeffs(0.25, 0.0, 1.0, 0.0, 0.0, -1.0);
        let t = tangent_direction(&ellipse, &HPoint::finite(0.0, 1.0)).unwrap();
        assert!(t.contains(&HPoint::finite(7.0, 1.0)));
        assert_eq!(
            tangent_direction(&unit, &HPoint::finite(0.0, 0.0)),
            Err(GeomError::NotOnCurve)
        );
        let pair = Conic::line_pair(&HLine::new(1.0, 0.0, 0.0), &HLine::new(0.0, 1.0, 0.0));
        assert_eq!(
            tangent_direction(&pair, &HPoint::finite(0.0, 0.0)),
            Err(GeomError::SingularPoint)
        );
    }

    fn entry() -> impl Strategy<Value = Scalar> {
        -2.0..2.0f64
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn projective_invariance(
            ts in prop::array::uniform4(-5.0..5.0f64),
            h in prop::array::uniform9(entry()),
            base in prop::array::uniform2(-3.0..3.0f64),
            angle in 0.0..std::f64::consts::PI,
        ) {
            for i in 0..4 {
                for j in i + 1..4 {
                    prop_assume!((ts[i] - ts[j]).abs() > 1e-2);
                }
            }
            let h = Matrix3::from_row_slice(&h);
            prop_assume!(h.determinant().abs() > 1e-2);
            let dir = [angle.cos(), angle.sin()];
            let pts: Vec<HPoint> = ts
                .iter()
                .map(|t| HPoint::finite(base[0] + t * dir[0], base[1] + t * dir[1]))
                .collect();
            let moved: Vec<HPoint> = pts
                .iter()
                .map(|p| HPoint::from_coords((h * Vector3::from(p.coords())).into()))
                .collect();
            let before = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            let after = match cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3]) {
                Ok(v) => v,
                // the collineation can push points arbitrarily close together
                Err(_) => return Ok(()),
            };
            prop_assert!((after - before).abs() <= 1e-8 * before.abs().max(1.0), "{before} {after}");
        }
    }
}
