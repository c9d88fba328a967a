use super::{CurveError, ExactPoint, PlaneCurve, Poly, Q3};

/// The quadratic inversion `X ↦ (A × X) × (M X)` with exact coefficients,
/// together with its fundamental triangle.
#[derive(Clone, Debug)]
pub struct QuadraticMap {
    f: [Poly; 3],
    vertices: [ExactPoint; 3],
    /// `(side, contracted vertex index)`: the side is mapped onto the vertex.
    sides: [([Q3; 3], usize); 3],
}

/// One exceptional factor split off by [`strict_transform`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalFactor {
    pub line: [Q3; 3],
    pub exponent: u32,
    /// Index (0 = A, 1 = B, 2 = C) of the vertex the line is contracted to.
    pub vertex: usize,
}

/// Result of [`strict_transform`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictTransform {
    pub curve: PlaneCurve,
    pub exceptional: Vec<ExceptionalFactor>,
}

fn cross(a: &[Q3; 3], b: &[Q3; 3]) -> [Q3; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn dot(a: &[Q3; 3], b: &[Q3; 3]) -> Q3 {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

fn proportional(p: &ExactPoint, q: &ExactPoint) -> bool {
    cross(p, q).iter().all(Q3::is_zero)
}

impl QuadraticMap {
    /// Builds the map from an exact symmetric matrix `gamma`, the pole `A`
    /// and the two base points `B`, `C` where the polar of `A` meets the
    /// conic. Every incidence is checked exactly, and so is the involution
    /// property `F(F(X)) ∝ X`.
    pub fn new(gamma: [[Q3; 3]; 3], pole: ExactPoint, b: ExactPoint, c: ExactPoint) -> Result<Self, CurveError> {
        for i in 0..3 {
            for j in 0..3 {
                if gamma[i][j] != gamma[j][i] {
                    return Err(CurveError::InexactInput("conic matrix is not symmetric"));
                }
            }
        }
        let apply = |p: &ExactPoint| -> [Q3; 3] { std::array::from_fn(|i| dot(&gamma[i], p)) };
        let polar_a = apply(&pole);
        for p in [&b, &c] {
            if !dot(p, &apply(p)).is_zero() {
                return Err(CurveError::InexactInput("base point is not on the conic"));
            }
            if !dot(p, &polar_a).is_zero() {
                return Err(CurveError::InexactInput("base point is not on the polar of the pole"));
            }
        }
        if dot(&pole, &polar_a).is_zero() {
            return Err(CurveError::InexactInput("pole lies on the conic"));
        }
        if proportional(&b, &c) {
            return Err(CurveError::InexactInput("base points coincide"));
        }
        let x = [Poly::var(0), Poly::var(1), Poly::var(2)];
        let lin = |row: &[Q3; 3]| Poly::linear(row);
        let ax: [Poly; 3] = [
            x[2].scale(&pole[1]).sub(&x[1].scale(&pole[2])),
            x[0].scale(&pole[2]).sub(&x[2].scale(&pole[0])),
            x[1].scale(&pole[0]).sub(&x[0].scale(&pole[1])),
        ];
        let mx: [Poly; 3] = std::array::from_fn(|i| lin(&gamma[i]));
        let f = [
            ax[1].mul(&mx[2]).sub(&ax[2].mul(&mx[1])),
            ax[2].mul(&mx[0]).sub(&ax[0].mul(&mx[2])),
            ax[0].mul(&mx[1]).sub(&ax[1].mul(&mx[0])),
        ];
        let vertices = [pole.clone(), b.clone(), c.clone()];
        let mut map = Self {
            f,
            vertices,
            sides: Default::default(),
        };
        map.check_involution()?;
        // find which vertex each side collapses onto by mapping its midpoint
        let side_pairs = [(1, 2), (0, 1), (0, 2)];
        for (slot, (i, j)) in side_pairs.into_iter().enumerate() {
            let line = cross(&map.vertices[i], &map.vertices[j]);
            let mid: ExactPoint = std::array::from_fn(|k| &map.vertices[i][k] + &map.vertices[j][k]);
            let img = map.apply(&mid);
            let vertex = (0..3)
                .find(|&v| proportional(&img, &map.vertices[v]))
                .ok_or(CurveError::InexactInput("side is not contracted to a vertex"))?;
            map.sides[slot] = (line, vertex);
        }
        Ok(map)
    }

    /// Triangle `A = (0,0)`, `B = (1,0)`, `C = (1/2, √3/2)` with the circle
    /// `1 − 2x + x² − (2/√3)y + y² = 0` tangent to `AB` at `B` and `AC` at `C`.
    pub fn canonical() -> Self {
        let z = Q3::zero;
        let gamma = [
            [Q3::one(), z(), Q3::int(-1)],
            [z(), Q3::one(), Q3::sqrt3_times(-1, 3)],
            [Q3::int(-1), Q3::sqrt3_times(-1, 3), Q3::one()],
        ];
        Self::new(
            gamma,
            [z(), z(), Q3::one()],
            [Q3::one(), z(), Q3::one()],
            [Q3::ratio(1, 2), Q3::sqrt3_times(1, 2), Q3::one()],
        )
        .expect("canonical configuration is consistent")
    }

    pub fn polys(&self) -> &[Poly; 3] {
        &self.f
    }

    /// `A`, `B`, `C`.
    pub fn vertices(&self) -> &[ExactPoint; 3] {
        &self.vertices
    }

    /// Sides `BC`, `AB`, `AC` with the vertex each is contracted to.
    pub fn sides(&self) -> &[([Q3; 3], usize); 3] {
        &self.sides
    }

    pub fn apply(&self, p: &ExactPoint) -> ExactPoint {
        std::array::from_fn(|i| self.f[i].eval(p))
    }

    fn check_involution(&self) -> Result<(), CurveError> {
        let ff: [Poly; 3] = std::array::from_fn(|i| self.f[i].compose(&self.f));
        for i in 0..3 {
            for j in i + 1..3 {
                let lhs = ff[i].mul(&Poly::var(j));
                let rhs = ff[j].mul(&Poly::var(i));
                if lhs != rhs {
                    return Err(CurveError::InexactInput("map is not an involution"));
                }
            }
        }
        Ok(())
    }
}

/// `c(f0, f1, f2)`, of degree `2n`.
pub fn total_transform(c: &PlaneCurve, q: &QuadraticMap) -> Result<Poly, CurveError> {
    let t = c.poly().compose(q.polys());
    if t.is_zero() {
        return Err(CurveError::ZeroPullback);
    }
    Ok(t)
}

/// Total transform with the three sides divided out as often as they
/// divide it. Each exponent must equal the multiplicity of `c` at the vertex
/// the side is contracted to.
pub fn strict_transform(c: &PlaneCurve, q: &QuadraticMap) -> Result<StrictTransform, CurveError> {
    for (line, _) in q.sides() {
        if c.poly().div_exact(&Poly::linear(line)).is_some() {
            return Err(CurveError::FundamentalComponent);
        }
    }
    let mut t = total_transform(c, q)?;
    let mut exceptional = Vec::new();
    for (line, vertex) in q.sides() {
        let l = Poly::linear(line);
        let mut exponent = 0;
        while let Some(next) = t.div_exact(&l) {
            t = next;
            exponent += 1;
        }
        let expected = c.multiplicity_at(&q.vertices()[*vertex]);
        if exponent != expected {
            return Err(CurveError::MultiplicityMismatch {
                expected,
                found: exponent,
            });
        }
        exceptional.push(ExceptionalFactor {
            line: line.clone(),
            exponent,
            vertex: *vertex,
        });
    }
    Ok(StrictTransform {
        curve: PlaneCurve::new(t)?,
        exceptional,
    })
}
