use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::nullspace;
use super::{strict_transform, CurveError, ExactPoint, Monomial, PlaneCurve, Poly, QuadraticMap, Q3};

/// One cell of the degree grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLawCase {
    pub n: u32,
    pub t: [u32; 3],
    /// Degree of the strict transform, `None` when no curve with these exact
    /// multiplicities and no fundamental component was found.
    pub degree: Option<u32>,
}

impl DegreeLawCase {
    pub fn expected(&self) -> i64 {
        2 * self.n as i64 - self.t.iter().map(|&t| t as i64).sum::<i64>()
    }

    pub fn holds(&self) -> bool {
        self.degree.is_none_or(|d| d as i64 == self.expected())
    }
}

/// Monomials of degree `n`, in a fixed order.
pub fn monomials(n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            out.push([i, j, n - i - j]);
        }
    }
    out
}

/// Linear conditions on the coefficients of a degree-`n` curve forcing
/// multiplicity at least `t` at `p`.
fn multiplicity_conditions(n: u32, p: &ExactPoint, t: u32) -> Vec<Vec<Q3>> {
    if t == 0 {
        return Vec::new();
    }
    let basis = monomials(n);
    let locals: Vec<(usize, Poly)> = basis
        .iter()
        .map(|m| {
            let c = PlaneCurve::new(Poly::monomial(*m, Q3::one())).expect("monomial is a curve");
            c.local_at(p)
        })
        .collect();
    let k = locals[0].0;
    basis
        .iter()
        .filter(|m| n - m[k] < t)
        .map(|target| locals.iter().map(|(_, l)| l.coeff(target)).collect())
        .collect()
}

/// Random degree-`n` curve with multiplicity exactly `t[i]` at the `i`-th
/// fundamental point and no fundamental line as a component.
pub fn random_curve_with_multiplicities(
    q: &QuadraticMap,
    n: u32,
    t: [u32; 3],
    rng: &mut impl Rng,
    attempts: usize,
) -> Option<PlaneCurve> {
    let basis = monomials(n);
    let rows: Vec<Vec<Q3>> = q
        .vertices()
        .iter()
        .zip(t)
        .flat_map(|(v, ti)| multiplicity_conditions(n, v, ti))
        .collect();
    let ns = nullspace(&rows, basis.len());
    if ns.is_empty() {
        return None;
    }
    let sides: Vec<Poly> = q.sides().iter().map(|(l, _)| Poly::linear(l)).collect();
    for _ in 0..attempts {
        let mut coeffs = vec![Q3::zero(); basis.len()];
        for v in &ns {
            let k = Q3::int(rng.gen_range(-5..=5));
            for (c, x) in coeffs.iter_mut().zip(v) {
                *c = &*c + &(&k * x);
            }
        }
        let poly = Poly::from_terms(basis.iter().copied().zip(coeffs));
        let Ok(curve) = PlaneCurve::new(poly) else {
            continue;
        };
        let exact = q.vertices().iter().zip(t).all(|(v, ti)| curve.multiplicity_at(v) == ti);
        let has_side = sides.iter().any(|s| curve.poly().div_exact(s).is_some());
        if exact && !has_side {
            return Some(curve);
        }
    }
    None
}

/// Runs the strict transform over `n ∈ 1..=4`, `t ∈ {0,1,2}³`.
pub fn degree_law_grid(q: &QuadraticMap, seed: u64) -> Result<Vec<DegreeLawCase>, CurveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=4 {
        for ta in 0..=2 {
            for tb in 0..=2 {
                for tc in 0..=2 {
                    let t = [ta, tb, tc];
                    let degree = match random_curve_with_multiplicities(q, n, t, &mut rng, 8) {
                        Some(c) => Some(strict_transform(&c, q)?.curve.degree()),
                        None => None,
                    };
                    out.push(DegreeLawCase { n, t, degree });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_count() {
        for n in 0..5 {
            assert_eq!(monomials(n).len() as u32, (n + 1) * (n + 2) / 2);
        }
    }

    #[test]
    fn imposed_multiplicities_are_exact() {
        let q = QuadraticMap::canonical();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = random_curve_with_multiplicities(&q, 3, [2, 1, 0], &mut rng, 8).unwrap();
        assert_eq!(c.degree(), 3);
        let m: Vec<u32> = q.vertices().iter().map(|v| c.multiplicity_at(v)).collect();
        assert_eq!(m, vec![2, 1, 0]);
    }

    #[test]
    fn too_many_conditions_are_infeasible() {
        let q = QuadraticMap::canonical();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // a line through three non-collinear points
        assert!(random_curve_with_multiplicities(&q, 1, [1, 1, 1], &mut rng, 8).is_none());
        // a conic singular at A through B contains the side AB
        assert!(random_curve_with_multiplicities(&q, 2, [2, 1, 0], &mut rng, 8).is_none());
    }
}
