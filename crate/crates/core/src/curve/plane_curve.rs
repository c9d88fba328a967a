use std::fmt;
use std::str::FromStr;

use crate::geom::HPoint;

use super::{CurveError, Monomial, Poly, Q3};

/// An exact homogeneous point `(x : y : w)` over ℚ(√3).
pub type ExactPoint = [Q3; 3];

/// An algebraic curve: a nonzero homogeneous polynomial scaled so its
/// lex-leading coefficient is one. Reducible and non-reduced curves are
/// allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneCurve {
    poly: Poly,
}

impl PlaneCurve {
    pub fn new(poly: Poly) -> Result<Self, CurveError> {
        if poly.is_zero() {
            return Err(CurveError::ZeroPolynomial);
        }
        if !poly.is_homogeneous() {
            return Err(CurveError::NotHomogeneous);
        }
        Ok(Self { poly: poly.monic() })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn line(l: &[Q3; 3]) -> Result<Self, CurveError> {
        Self::new(Poly::linear(l))
    }

    /// Circle `(x − a w)² + (y − b w)² − r² w²` from exact center and `r²`.
    pub fn circle(center: [Q3; 2], r2: Q3) -> Result<Self, CurveError> {
        let x = Poly::var(0).sub(&Poly::var(2).scale(&center[0]));
        let y = Poly::var(1).sub(&Poly::var(2).scale(&center[1]));
        Self::new(x.pow(2).add(&y.pow(2)).sub(&Poly::var(2).pow(2).scale(&r2)))
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.poly.eval(p).is_zero()
    }

    /// Multiplicity at `p`: the lowest order of the Taylor expansion there,
    /// 0 when `p` is not on the curve.
    pub fn multiplicity_at(&self, p: &ExactPoint) -> u32 {
        let (k, local) = self.local_at(p);
        let n = self.degree();
        local.terms().map(|(m, _)| n - m[k]).min().unwrap_or(n)
    }

    /// Homogeneous Taylor form of order `m` at `p`, as a binary form in the
    /// two coordinates other than the chart coordinate, returned with their
    /// indices.
    pub fn taylor_form(&self, p: &ExactPoint, order: u32) -> (Vec<Q3>, [usize; 2]) {
        let (k, local) = self.local_at(p);
        let others = other_indices(k);
        let n = self.degree();
        let mut coeffs = vec![Q3::zero(); order as usize + 1];
        for (m, c) in local.terms() {
            if n - m[k] == order {
                // coefficient of u^(order − j) v^j
                coeffs[m[others[1]] as usize] = c.clone();
            }
        }
        (coeffs, others)
    }

    /// Moves `p` to a coordinate vertex of a chart containing it.
    pub(crate) fn local_at(&self, p: &ExactPoint) -> (usize, Poly) {
        let k = chart_index(p);
        let inv = p[k].inv().expect("chart coordinate is nonzero");
        let scaled: ExactPoint = std::array::from_fn(|i| &p[i] * &inv);
        (k, self.poly.translate_to_vertex(&scaled, k))
    }

    /// Kind of double point at `p`.
    pub fn classify_singularity(&self, p: &ExactPoint) -> Result<Singularity, CurveError> {
        let m = self.multiplicity_at(p);
        if m != 2 {
            return Err(CurveError::WrongMultiplicity(m));
        }
        let (q, _) = self.taylor_form(p, 2);
        let (a, b, c) = (&q[0], &q[1], &q[2]);
        let disc = &(b * b) - &(&Q3::int(4) * &(a * c));
        match disc.signum() {
            std::cmp::Ordering::Greater => Ok(Singularity::Node { real_tangents: true }),
            std::cmp::Ordering::Less => Ok(Singularity::Node { real_tangents: false }),
            std::cmp::Ordering::Equal => {
                // the double tangent direction (u, v) of a u² + b uv + c v²
                let (u, v) = if a.is_zero() {
                    (Q3::one(), Q3::zero())
                } else {
                    (-b, &Q3::int(2) * a)
                };
                let (cubic, _) = self.taylor_form(p, 3);
                let mut val = Q3::zero();
                for (j, cj) in cubic.iter().enumerate() {
                    let term = cj * &(&pow(&u, 3 - j as u32) * &pow(&v, j as u32));
                    val = &val + &term;
                }
                if val.is_zero() {
                    Ok(Singularity::TacnodeOrWorse)
                } else {
                    Ok(Singularity::Cusp)
                }
            }
        }
    }

    /// Largest `|c(p)| / ‖c‖₁` over samples normalized to max-abs one.
    pub fn eval_residual(&self, samples: &[HPoint]) -> f64 {
        let norm = self.poly.norm1_f64();
        samples
            .iter()
            .map(|p| self.poly.eval_f64(p.coords()).abs() / norm)
            .fold(0.0, f64::max)
    }

    /// Floating-point conic matrix of a degree-2 curve.
    pub fn to_conic(&self) -> Option<crate::geom::Conic> {
        if self.degree() != 2 {
            return None;
        }
        let c = |m: Monomial| self.poly.coeff(&m).to_f64();
        Some(crate::geom::Conic::from_coeffs(
            c([2, 0, 0]),
            c([1, 1, 0]),
            c([0, 2, 0]),
            c([1, 0, 1]),
            c([0, 1, 1]),
            c([0, 0, 2]),
        ))
    }
}

/// Free function form of [`PlaneCurve::multiplicity_at`].
pub fn multiplicity_at(c: &PlaneCurve, p: &ExactPoint) -> u32 {
    c.multiplicity_at(p)
}

/// Free function form of [`PlaneCurve::classify_singularity`].
pub fn classify_singularity(c: &PlaneCurve, p: &ExactPoint) -> Result<Singularity, CurveError> {
    c.classify_singularity(p)
}

/// Free function form of [`PlaneCurve::eval_residual`].
pub fn curve_eval_residual(c: &PlaneCurve, samples: &[HPoint]) -> f64 {
    c.eval_residual(samples)
}

/// Kind of a double point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singularity {
    /// Two distinct tangents; with `real_tangents` false the point is an
    /// isolated real point whose tangents are complex conjugate.
    Node {
        real_tangents: bool,
    },
    Cusp,
    TacnodeOrWorse,
}

fn pow(q: &Q3, e: u32) -> Q3 {
    let mut out = Q3::one();
    for _ in 0..e {
        out = &out * q;
    }
    out
}

fn chart_index(p: &ExactPoint) -> usize {
    [2, 0, 1]
        .into_iter()
        .find(|&i| !p[i].is_zero())
        .expect("exact point has a nonzero coordinate")
}

fn other_indices(k: usize) -> [usize; 2] {
    match k {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// Text form: a `degree n` line, then one `(i,j,k): coeff` line per term
/// in lex order, coefficients as `num/den[+num/den*s3]`.
impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree {}", self.degree())?;
        for (m, c) in self.poly.terms().rev() {
            writeln!(f, "({},{},{}): {}", m[0], m[1], m[2], c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneCurve({:?})", self.poly)
    }
}

impl FromStr for PlaneCurve {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = |line: usize, message: String| CurveError::Parse { line, message };
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing degree header".into()))?;
        let degree: u32 = header
            .strip_prefix("degree")
            .map(str::trim)
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| parse_err(hl, format!("expected 'degree N', found {header:?}")))?;
        let mut poly = Poly::zero();
        for (ln, line) in lines {
            let (mono, coeff) = line
                .split_once(':')
                .ok_or_else(|| parse_err(ln, "expected '(i,j,k): coeff'".into()))?;
            let inner = mono
                .trim()
                .strip_prefix('(')
                .and_then(|m| m.strip_suffix(')'))
                .ok_or_else(|| parse_err(ln, format!("bad monomial {mono:?}")))?;
            let exps: Vec<u32> = inner
                .split(',')
                .map(|e| e.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| parse_err(ln, format!("bad exponents {inner:?}")))?;
            let [i, j, k] = exps[..] else {
                return Err(parse_err(ln, "expected three exponents".into()));
            };
            if i + j + k != degree {
                return Err(parse_err(ln, format!("monomial degree differs from {degree}")));
            }
            let c: Q3 = coeff.parse().map_err(|e| parse_err(ln, e))?;
            poly.add_term([i, j, k], c);
        }
        PlaneCurve::new(poly)
    }
}
