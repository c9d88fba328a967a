use nalgebra::{Matrix2, Vector2};

use crate::geom::{conic_through, cross3, max_abs3, Conic, HLine, HPoint, Scalar};

use super::TransformError;

/// A projectivity between the pencil of lines through `p` and the pencil
/// through `q`, acting on line directions: the line through `p` with
/// direction `d` goes to the line through `q` with direction `m d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projectivity {
    pub p: HPoint,
    pub q: HPoint,
    pub m: Matrix2<Scalar>,
}

impl Projectivity {
    pub fn new(p: HPoint, q: HPoint, m: Matrix2<Scalar>) -> Result<Self, TransformError> {
        if p.is_at_infinity() || q.is_at_infinity() || p.coincides(&q) {
            return Err(TransformError::DegenerateProjectivity);
        }
        if m.determinant().abs() <= 1e-12 * m.amax().powi(2) {
            return Err(TransformError::DegenerateProjectivity);
        }
        Ok(Self { p, q, m })
    }

    /// The projectivity sending line `p x_i` to line `q x_i` for three
    /// points `x_i`.
    pub fn from_meets(p: HPoint, q: HPoint, x: [HPoint; 3]) -> Result<Self, TransformError> {
        let dir = |from: &HPoint, to: &HPoint| -> Result<Vector2<Scalar>, TransformError> {
            let (Some(a), Some(b)) = (from.affine(), to.affine()) else {
                return Err(TransformError::DegenerateProjectivity);
            };
            Ok(Vector2::new(b[0] - a[0], b[1] - a[1]))
        };
        let ds = [dir(&p, &x[0])?, dir(&p, &x[1])?, dir(&p, &x[2])?];
        let es = [dir(&q, &x[0])?, dir(&q, &x[1])?, dir(&q, &x[2])?];
        let d = Matrix2::from_columns(&[ds[0], ds[1]]);
        let e = Matrix2::from_columns(&[es[0], es[1]]);
        let (Some(di), Some(ei)) = (d.try_inverse(), e.try_inverse()) else {
            return Err(TransformError::DegenerateProjectivity);
        };
        let a = di * ds[2];
        let b = ei * es[2];
        if a.iter().any(|v| v.abs() < 1e-12) {
            return Err(TransformError::DegenerateProjectivity);
        }
        let scale = Matrix2::from_diagonal(&Vector2::new(b[0] / a[0], b[1] / a[1]));
        Self::new(p, q, e * scale * di)
    }

    /// Lines of the two pencils corresponding to direction `d`.
    pub fn lines(&self, d: [Scalar; 2]) -> (HLine, HLine) {
        let e = self.m * Vector2::from(d);
        (
            self.p.join(&HPoint::at_infinity(d[0], d[1])),
            self.q.join(&HPoint::at_infinity(e[0], e[1])),
        )
    }

    /// Meet of corresponding lines for direction `d`; `None` when they
    /// coincide.
    pub fn meet(&self, d: [Scalar; 2]) -> Option<HPoint> {
        let (l, m) = self.lines(d);
        let x = l.meet(&m);
        (max_abs3(cross3(l.coords(), m.coords())) > 1e-12).then_some(x)
    }

    /// True when the line `pq` corresponds to itself, i.e. the
    /// projectivity is a perspectivity.
    pub fn is_perspectivity(&self) -> bool {
        let [px, py] = self.p.xy();
        let [qx, qy] = self.q.xy();
        let d = Vector2::new(qx - px, qy - py).normalize();
        let e = self.m * d;
        (d[0] * e[1] - d[1] * e[0]).abs() <= 1e-9 * e.norm()
    }
}

/// The conic generated by a projectivity between two pencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrganicConic {
    pub conic: Conic,
    /// Set when the projectivity is a perspectivity and the locus splits
    /// into the line `pq` and the axis of perspectivity.
    pub degenerate: bool,
}

/// Fits the locus of meets of corresponding lines.
pub fn organic_conic(sigma: &Projectivity) -> Result<OrganicConic, TransformError> {
    let samples: Vec<HPoint> = (0..12)
        .filter_map(|k| {
            let t = 0.17 + k as Scalar * std::f64::consts::PI / 12.0;
            sigma.meet([t.cos(), t.sin()])
        })
        .collect();
    if sigma.is_perspectivity() {
        let axis = samples
            .iter()
            .find(|x| !x.coincides(&samples[0]))
            .map(|x| samples[0].join(x))
            .ok_or(TransformError::DegenerateProjectivity)?;
        let pq = sigma.p.join(&sigma.q);
        return Ok(OrganicConic {
            conic: Conic::line_pair(&pq, &axis),
            degenerate: true,
        });
    }
    // spread the five fit points over the sampled meets, preferring finite ones
    let mut picked: Vec<HPoint> = samples.iter().copied().filter(HPoint::is_finite).collect();
    if picked.len() < 5 {
        picked = samples.clone();
    }
    let step = picked.len() as Scalar / 5.0;
    let five: [HPoint; 5] = std::array::from_fn(|i| picked[(i as Scalar * step) as usize]);
    let conic = conic_through(&five)?;
    Ok(OrganicConic {
        conic,
        degenerate: conic.rank() < 3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perspectivity_degenerates() {
        let p = HPoint::finite(-1.0, 0.0);
        let q = HPoint::finite(1.0, 0.0);
        // three points of the axis y = x + 2
        let axis = [
            HPoint::finite(0.0, 2.0),
            HPoint::finite(1.0, 3.0),
            HPoint::finite(-3.0, -1.0),
        ];
        let sigma = Projectivity::from_meets(p, q, axis).unwrap();
        assert!(sigma.is_perspectivity());
        let out = organic_conic(&sigma).unwrap();
        assert!(out.degenerate);
        assert_eq!(out.conic.rank(), 2);
    }

    #[test]
    fn generic_projectivity_passes_through_both_vertices() {
        let p = HPoint::finite(-1.0, 0.0);
        let q = HPoint::finite(1.0, 0.0);
        let meets = [
            HPoint::finite(0.0, 1.0),
            HPoint::finite(0.0, -1.0),
            HPoint::finite(1.0, 1.0),
        ];
        let sigma = Projectivity::from_meets(p, q, meets).unwrap();
        let out = organic_conic(&sigma).unwrap();
        assert!(!out.degenerate);
        let oracle = conic_through(&[p, q, meets[0], meets[1], meets[2]]).unwrap();
        assert!(out.conic.approx_eq(&oracle, 1e-9));
        assert!(out.conic.eval(&p).abs() < 1e-9);
        assert!(out.conic.eval(&q).abs() < 1e-9);
        for k in 0..50 {
            let t = 0.05 + k as Scalar * 0.061;
            if let Some(x) = sigma.meet([t.cos(), t.sin()]) {
                assert!(out.conic.eval(&x).abs() < 1e-8, "{x:?}");
            }
        }
    }

    #[test]
    fn rejects_singular_and_coincident() {
        let p = HPoint::finite(0.0, 0.0);
        assert!(Projectivity::new(p, p, Matrix2::identity()).is_err());
        let q = HPoint::finite(1.0, 0.0);
        assert!(Projectivity::new(p, q, Matrix2::new(1.0, 2.0, 2.0, 4.0)).is_err());
    }
}
