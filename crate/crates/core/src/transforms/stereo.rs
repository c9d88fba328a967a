use crate::geom::{HPoint, Scalar};

use super::TransformError;

/// Projection pole on the unit sphere; the image plane is always `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pole {
    North,
    South,
}

impl Pole {
    fn sign(self) -> Scalar {
        match self {
            Pole::North => 1.0,
            Pole::South => -1.0,
        }
    }
}

/// A point of the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl SpherePoint {
    /// Rejects triples whose norm differs from one by more than `1e-12`.
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Option<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        ((n - 1.0).abs() <= 1e-12).then_some(Self { x, y, z })
    }

    /// Scales a nonzero triple onto the sphere.
    pub fn normalized(x: Scalar, y: Scalar, z: Scalar) -> Option<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        (n > 0.0 && n.is_finite()).then(|| Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn coords(&self) -> [Scalar; 3] {
        [self.x, self.y, self.z]
    }
}

/// Central projection from the pole onto `z = 0`. The result is homogeneous,
/// so points near the pole go to far points rather than overflowing.
pub fn stereo_project(pole: Pole, s: &SpherePoint) -> Result<HPoint, TransformError> {
    let w = 1.0 - pole.sign() * s.z;
    if s.x.hypot(s.y) <= 1e-15 && w <= 1e-15 {
        return Err(TransformError::PoleProjection);
    }
    Ok(HPoint::new(s.x, s.y, w))
}

/// Inverse of [`stereo_project`]; points at infinity lift to the pole.
pub fn stereo_lift(pole: Pole, p: &HPoint) -> SpherePoint {
    let [x, y, w] = p.coords();
    let q = x * x + y * y;
    let den = q + w * w;
    SpherePoint {
        x: 2.0 * x * w / den,
        y: 2.0 * y * w / den,
        z: pole.sign() * (q - w * w) / den,
    }
}

/// Lift from the north pole, then project from the south pole.
pub fn ns_composition(p: &HPoint) -> Result<HPoint, TransformError> {
    stereo_project(Pole::South, &stereo_lift(Pole::North, p)).map_err(|e| match e {
        TransformError::PoleProjection => TransformError::CenterInversion,
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn projection_examples() {
        let eq = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(stereo_project(Pole::North, &eq).unwrap().xy(), [1.0, 0.0]);
        let south = SpherePoint::new(0.0, 0.0, -1.0).unwrap();
        assert_eq!(stereo_project(Pole::North, &south).unwrap().xy(), [0.0, 0.0]);
        let s = SpherePoint::new(0.0, 0.6, 0.8).unwrap();
        let p = stereo_project(Pole::North, &s).unwrap().xy();
        assert_abs_diff_eq!(p[1], 3.0, epsilon = 1e-14);
        let north = SpherePoint::new(0.0, 0.0, 1.0).unwrap();
        assert_eq!(stereo_project(Pole::North, &north), Err(TransformError::PoleProjection));
    }

    #[test]
    fn lift_examples() {
        let s = stereo_lift(Pole::North, &HPoint::finite(0.0, 0.0));
        assert_eq!(s.coords(), [0.0, 0.0, -1.0]);
        let s = stereo_lift(Pole::North, &HPoint::finite(1.0, 0.0));
        assert_eq!(s.coords(), [1.0, 0.0, 0.0]);
        let s = stereo_lift(Pole::North, &HPoint::finite(3.0, 0.0));
        assert_abs_diff_eq!(s.x, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(s.z, 0.8, epsilon = 1e-15);
        let s = stereo_lift(Pole::North, &HPoint::at_infinity(1.0, 2.0));
        assert_eq!(s.coords(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn composition_examples() {
        let p = ns_composition(&HPoint::finite(2.0, 0.0)).unwrap().xy();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        let q = HPoint::finite(0.6, 0.8);
        assert!(ns_composition(&q).unwrap().approx_eq(&q, 1e-15));
        assert_eq!(
            ns_composition(&HPoint::finite(0.0, 0.0)),
            Err(TransformError::CenterInversion)
        );
    }
}
