use geokernel::geom::{cross_ratio, Circle, Conic, HPoint};
use geokernel::transforms::{
    central_project, harmonic_conjugate, invert_point, polar, pole, stereo_lift, stereo_project, PlaneFrame, Pole,
};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

fn away_from(c: [f64; 2], p: [f64; 2]) -> bool {
    (p[0] - c[0]).hypot(p[1] - c[1]) > 0.1
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Complex cross ratio `(z1 − z3)(z2 − z4) / ((z1 − z4)(z2 − z3))`.
fn complex_cross(z: [[f64; 2]; 4]) -> [f64; 2] {
    let s = |a: [f64; 2], b: [f64; 2]| [a[0] - b[0], a[1] - b[1]];
    let m = |a: [f64; 2], b: [f64; 2]| [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]];
    let num = m(s(z[0], z[2]), s(z[1], z[3]));
    let den = m(s(z[0], z[3]), s(z[1], z[2]));
    let d = den[0] * den[0] + den[1] * den[1];
    [
        (num[0] * den[0] + num[1] * den[1]) / d,
        (num[1] * den[0] - num[0] * den[1]) / d,
    ]
}

proptest! {
    #[test]
    fn inversion_scales_distances(
        cx in coord(), cy in coord(), r in 0.5..3.0f64,
        p in prop::array::uniform2(coord()), q in prop::array::uniform2(coord()),
    ) {
        let c = [cx, cy];
        prop_assume!(away_from(c, p) && away_from(c, q));
        let circ = Circle::new(cx, cy, r).unwrap();
        let ip = invert_point(&circ, &HPoint::finite(p[0], p[1])).unwrap().xy();
        let iq = invert_point(&circ, &HPoint::finite(q[0], q[1])).unwrap().xy();
        let want = r * r * dist(p, q) / (dist(c, p) * dist(c, q));
        prop_assert!((dist(ip, iq) - want).abs() <= 1e-9 * want.max(1.0));
    }

    /// Inversion is anticonformal: it conjugates the complex cross ratio.
    #[test]
    fn inversion_conjugates_cross_ratios(
        r in 0.5..3.0f64,
        pts in prop::array::uniform4(prop::array::uniform2(coord())),
    ) {
        for i in 0..4 {
            prop_assume!(away_from([0.0, 0.0], pts[i]));
            for j in i + 1..4 {
                prop_assume!(dist(pts[i], pts[j]) > 0.1);
            }
        }
        let circ = Circle::new(0.0, 0.0, r).unwrap();
        let img = pts.map(|p| invert_point(&circ, &HPoint::finite(p[0], p[1])).unwrap().xy());
        let (a, b) = (complex_cross(pts), complex_cross(img));
        let scale = a[0].hypot(a[1]).max(1.0);
        prop_assert!((a[0] - b[0]).abs() <= 1e-7 * scale);
        prop_assert!((a[1] + b[1]).abs() <= 1e-7 * scale);
    }

    #[test]
    fn stereographic_round_trip(x in coord(), y in coord(), north in any::<bool>()) {
        let pole_ = if north { Pole::North } else { Pole::South };
        let s = stereo_lift(pole_, &HPoint::finite(x, y));
        let [a, b, c] = s.coords();
        prop_assert!((a * a + b * b + c * c - 1.0).abs() < 1e-12);
        let back = stereo_project(pole_, &s).unwrap().xy();
        prop_assert!(dist(back, [x, y]) < 1e-9 * x.hypot(y).max(1.0));
    }

    #[test]
    fn pole_inverts_polar(
        a in 0.3..3.0f64, c in 0.3..3.0f64, b in -0.5..0.5f64,
        p in prop::array::uniform2(coord()),
    ) {
        let k = Conic::from_coeffs(a, b, c, 0.0, 0.0, -1.0);
        let x = HPoint::finite(p[0], p[1]);
        prop_assume!(!k.contains(&x) && p[0].hypot(p[1]) > 1e-3);
        let back = pole(&k, &polar(&k, &x).unwrap()).unwrap();
        prop_assert!(dist(back.xy(), p) < 1e-9 * p[0].hypot(p[1]).max(1.0));
    }

    #[test]
    fn harmonic_conjugate_is_an_involution(
        o in prop::array::uniform2(coord()), dir in 0.0..std::f64::consts::PI,
        ta in -3.0..3.0f64, tb in -3.0..3.0f64, tc in -3.0..3.0f64,
    ) {
        prop_assume!((ta - tb).abs() > 0.1 && (ta - tc).abs() > 0.1 && (tb - tc).abs() > 0.1);
        prop_assume!((2.0 * tc - ta - tb).abs() > 0.1);
        let at = |t: f64| HPoint::finite(o[0] + t * dir.cos(), o[1] + t * dir.sin());
        let (a, b, c) = (at(ta), at(tb), at(tc));
        let d = harmonic_conjugate(&a, &b, &c).unwrap();
        prop_assert!((cross_ratio(&a, &b, &c, &d).unwrap() + 1.0).abs() < 1e-9);
        let back = harmonic_conjugate(&a, &b, &d).unwrap();
        prop_assert!(back.approx_eq(&c, 1e-9));
    }

    /// Central projection between planes keeps cross ratios of collinear
    /// points.
    #[test]
    fn central_projection_keeps_cross_ratios(
        h in 1.5..4.0f64, cz in 5.0..8.0f64, cx in -1.0..1.0f64,
        ts in prop::array::uniform4(-2.0..2.0f64), dir in 0.0..std::f64::consts::PI,
    ) {
        for i in 0..4 {
            for j in i + 1..4 {
                prop_assume!((ts[i] - ts[j]).abs() > 0.1);
            }
        }
        let src = PlaneFrame::horizontal(0.0);
        let tilt = 0.3f64;
        let dst = PlaneFrame::new([0.0, 0.0, h], [tilt.cos(), 0.0, tilt.sin()], [0.0, 1.0, 0.0]).unwrap();
        let pts: Vec<HPoint> = ts.iter().map(|t| HPoint::finite(t * dir.cos(), 0.5 + t * dir.sin())).collect();
        let img: Vec<HPoint> = pts.iter().map(|p| central_project([cx, 0.2, cz], &src, &dst, p).unwrap()).collect();
        let before = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let after = cross_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap();
        prop_assert!((before - after).abs() < 1e-7 * before.abs().max(1.0));
    }
}
