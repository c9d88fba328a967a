use nalgebra::{DMatrix, SMatrix};

use super::{det3, Conic, GeomError, HPoint, EPS_INCIDENCE};

/// The conic through five points, no four of them collinear.
///
/// Solves for the null vector of the 5×6 design matrix with an SVD. Three
/// collinear points are allowed and give the reducible conic made of that
/// line and the line through the other two.
pub fn conic_through(points: &[HPoint; 5]) -> Result<Conic, GeomError> {
    for i in 0..5 {
        for j in i + 1..5 {
            if points[i].coincides(&points[j]) {
                return Err(GeomError::DegenerateInput("coincident points"));
            }
        }
    }
    for skip in 0..5 {
        let quad: Vec<&HPoint> = (0..5).filter(|&k| k != skip).map(|k| &points[k]).collect();
        let collinear = (0..4).all(|drop| {
            let tri: Vec<[f64; 3]> = (0..4).filter(|&k| k != drop).map(|k| quad[k].coords()).collect();
            det3(tri[0], tri[1], tri[2]).abs() <= EPS_INCIDENCE
        });
        if collinear {
            return Err(GeomError::DegenerateInput("four collinear points"));
        }
    }
    // pad with a zero row so the SVD yields a full 6×6 right basis
    let mut design = DMatrix::<f64>::zeros(6, 6);
    for (row, p) in points.iter().enumerate() {
        let [x, y, w] = p.coords();
        let vals = [x * x, x * y, y * y, x * w, y * w, w * w];
        for (col, v) in vals.iter().enumerate() {
            design[(row, col)] = *v;
        }
    }
    let svd = design.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let (min_i, second) = (order[0], order[1]);
    if sv[second] <= 1e-10 * sv.max() {
        return Err(GeomError::DegenerateInput("conic not unique"));
    }
    let row = v_t.row(min_i);
    let c: SMatrix<f64, 1, 6> = SMatrix::from_iterator(row.iter().copied());
    Ok(Conic::from_coeffs(c[0], c[1], c[2], c[3], c[4], c[5]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Circle, HLine};
    use proptest::prelude::*;

    #[test]
    fn unit_circle_samples() {
        let c = Circle::new(0.0, 0.0, 1.0).unwrap();
        let pts = [0.1, 1.3, 2.0, 3.7, 5.1].map(|t| c.point_at(t));
        let fit = conic_through(&pts).unwrap();
        assert!(fit.approx_eq(&c.to_conic(), 1e-12));
    }

    #[test]
    fn generic_points_give_rank_three() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 4.0)].map(|(x, y)| HPoint::finite(x, y));
        let fit = conic_through(&pts).unwrap();
        assert_eq!(fit.rank(), 3);
        for p in &pts {
            assert!(fit.eval(p).abs() < EPS_INCIDENCE);
        }
        // conics through the unit square's corners: λ(x² − x) + μ(y² − y);
        // (2, 4) forces 2λ + 12μ = 0
        let oracle = Conic::from_coeffs(6.0, 0.0, -1.0, -6.0, 1.0, 0.0);
        assert!(fit.approx_eq(&oracle, 1e-12), "{fit:?}");
    }

    #[test]
    fn three_plus_two_is_a_line_pair() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (3.0, 0.0), (0.0, 1.0), (1.0, 2.0)].map(|(x, y)| HPoint::finite(x, y));
        let fit = conic_through(&pts).unwrap();
        assert_eq!(fit.rank(), 2);
        let expected = Conic::line_pair(&HLine::new(0.0, 1.0, 0.0), &pts[3].join(&pts[4]));
        assert!(fit.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn four_collinear_rejected() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (0.0, 1.0)].map(|(x, y)| HPoint::finite(x, y));
        assert!(matches!(conic_through(&pts), Err(GeomError::DegenerateInput(_))));
    }

    proptest! {
        #[test]
        fn reproduces_a_known_conic(
            coeffs in prop::array::uniform6(-3.0..3.0f64),
            ts in prop::array::uniform5(0.0..std::f64::consts::TAU),
        ) {
            // sample an ellipse x²/a² + y²/b² = 1 moved by an affine map
            let (a, b) = (1.0 + coeffs[0].abs(), 0.5 + coeffs[1].abs());
            let (ca, sa) = (coeffs[2].cos(), coeffs[2].sin());
            let (tx, ty) = (coeffs[3], coeffs[4]);
            for i in 0..5 {
                for j in i + 1..5 {
                    prop_assume!((ts[i] - ts[j]).abs() > 0.05);
                }
            }
            let pts = ts.map(|t| {
                let (x, y) = (a * t.cos(), b * t.sin());
                HPoint::finite(ca * x - sa * y + tx, sa * x + ca * y + ty)
            });
            let base = Conic::from_coeffs(1.0 / (a * a), 0.0, 1.0 / (b * b), 0.0, 0.0, -1.0);
            let h = nalgebra::Matrix3::new(ca, -sa, tx, sa, ca, ty, 0.0, 0.0, 1.0);
            let expected = base.transformed(&h).unwrap();
            let fit = conic_through(&pts).unwrap();
            prop_assert!(fit.approx_eq(&expected, 1e-8), "{fit:?} vs {expected:?}");
        }
    }
}
