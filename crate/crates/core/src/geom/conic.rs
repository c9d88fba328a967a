use nalgebra::{Matrix3, Vector3};

use super::{GeomError, HLine, HPoint, Scalar, EPS_INCIDENCE};

/// A conic `pᵀ M p = 0` with `M` symmetric.
///
/// The matrix is scaled by a positive factor so its largest entry has
/// magnitude one; the sign of `M` is kept, so the inside of an ellipse keeps
/// the sign it was built with.
#[derive(Clone, Copy, PartialEq)]
pub struct Conic {
    m: Matrix3<Scalar>,
}

impl Conic {
    pub fn from_matrix(m: Matrix3<Scalar>) -> Self {
        let sym = (m + m.transpose()) * 0.5;
        let scale = sym.amax();
        let m = if scale > 0.0 && scale.is_finite() {
            sym / scale
        } else {
            sym
        };
        Self { m }
    }

    pub fn from_rows(rows: [[Scalar; 3]; 3]) -> Self {
        Self::from_matrix(Matrix3::from_fn(|i, j| rows[i][j]))
    }

    /// `A x² + B xy + C y² + D xw + E yw + F w²`.
    pub fn from_coeffs(a: Scalar, b: Scalar, c: Scalar, d: Scalar, e: Scalar, f: Scalar) -> Self {
        Self::from_rows([[a, b / 2.0, d / 2.0], [b / 2.0, c, e / 2.0], [d / 2.0, e / 2.0, f]])
    }

    /// The degenerate conic made of two lines.
    pub fn line_pair(l1: &HLine, l2: &HLine) -> Self {
        let a = Vector3::from(l1.coords());
        let b = Vector3::from(l2.coords());
        Self::from_matrix(a * b.transpose() + b * a.transpose())
    }

    pub fn matrix(&self) -> &Matrix3<Scalar> {
        &self.m
    }

    /// Coefficients `[A, B, C, D, E, F]` as in [`Conic::from_coeffs`].
    pub fn coeffs(&self) -> [Scalar; 6] {
        let m = &self.m;
        [
            m[(0, 0)],
            2.0 * m[(0, 1)],
            m[(1, 1)],
            2.0 * m[(0, 2)],
            2.0 * m[(1, 2)],
            m[(2, 2)],
        ]
    }

    /// `pᵀ M p` on the normalized representative of `p`.
    pub fn eval(&self, p: &HPoint) -> Scalar {
        let v = Vector3::from(p.coords());
        v.dot(&(self.m * v))
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.eval(p).abs() <= EPS_INCIDENCE
    }

    /// `M p`, the polar line of `p`.
    pub fn apply(&self, p: &HPoint) -> [Scalar; 3] {
        (self.m * Vector3::from(p.coords())).into()
    }

    pub fn polar_of(&self, p: &HPoint) -> HLine {
        HLine::from_coords(self.apply(p))
    }

    /// Numerical rank from singular values relative to the largest.
    pub fn rank(&self) -> usize {
        let sv = self.m.singular_values();
        let top = sv.max();
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > 1e-9 * top).count()
    }

    pub fn is_degenerate(&self) -> bool {
        self.rank() < 3
    }

    pub fn determinant(&self) -> Scalar {
        self.m.determinant()
    }

    pub fn inverse(&self) -> Result<Matrix3<Scalar>, GeomError> {
        if self.rank() < 3 {
            return Err(GeomError::DegenerateInput("singular conic"));
        }
        self.m.try_inverse().ok_or(GeomError::DegenerateInput("singular conic"))
    }

    /// Sign-insensitive max-entry distance between normalized matrices.
    pub fn distance(&self, other: &Conic) -> Scalar {
        let plus = (self.m - other.m).amax();
        let minus = (self.m + other.m).amax();
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &Conic, eps: Scalar) -> bool {
        self.distance(other) <= eps
    }

    /// Applies a collineation `p ↦ H p`; the new matrix is `H⁻ᵀ M H⁻¹`.
    pub fn transformed(&self, h: &Matrix3<Scalar>) -> Option<Conic> {
        let hi = h.try_inverse()?;
        Some(Conic::from_matrix(hi.transpose() * self.m * hi))
    }
}

impl std::fmt::Debug for Conic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d, e, g] = self.coeffs();
        write!(f, "Conic({a}x² + {b}xy + {c}y² + {d}x + {e}y + {g})")
    }
}
