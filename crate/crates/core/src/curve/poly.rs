use std::collections::BTreeMap;

use super::Q3;

/// Exponent triple of `x^i y^j w^k`. Keys compare lexicographically, which
/// is the lex monomial order with `x > y > w`.
pub type Monomial = [u32; 3];

/// Sparse polynomial in `x, y, w` over ℚ(√3). Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q3>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q3) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(m: Monomial, c: Q3) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// The coordinate `x` (0), `y` (1) or `w` (2).
    pub fn var(i: usize) -> Self {
        let mut m = [0; 3];
        m[i] = 1;
        Self::monomial(m, Q3::one())
    }

    /// The linear form `l0 x + l1 y + l2 w`.
    pub fn linear(l: &[Q3; 3]) -> Self {
        let mut p = Self::zero();
        for (i, c) in l.iter().enumerate() {
            let mut m = [0; 3];
            m[i] = 1;
            p.add_term(m, c.clone());
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q3)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q3) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q3)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q3 {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m[0] + m[1] + m[2]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m[0] + m[1] + m[2] == d)
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Monomial, &Q3)> {
        self.terms.last_key_value()
    }

    pub fn scale(&self, c: &Q3) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => Poly::zero(),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term([m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]], c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(Q3::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, p: &[Q3; 3]) -> Q3 {
        let mut pows: [Vec<Q3>; 3] = Default::default();
        let deg = self.degree() as usize;
        for i in 0..3 {
            pows[i].push(Q3::one());
            for k in 1..=deg {
                let next = &pows[i][k - 1] * &p[i];
                pows[i].push(next);
            }
        }
        let mut acc = Q3::zero();
        for (m, c) in &self.terms {
            let t = c * &(&pows[0][m[0] as usize] * &(&pows[1][m[1] as usize] * &pows[2][m[2] as usize]));
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval_f64(&self, p: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64() * p[0].powi(m[0] as i32) * p[1].powi(m[1] as i32) * p[2].powi(m[2] as i32))
            .sum()
    }

    /// Sum of absolute coefficient values in floating point.
    pub fn norm1_f64(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).sum()
    }

    /// `self(f0, f1, f2)`.
    pub fn compose(&self, f: &[Poly; 3]) -> Poly {
        let deg = self.degree();
        let mut pows: [Vec<Poly>; 3] = Default::default();
        for i in 0..3 {
            pows[i].push(Poly::constant(Q3::one()));
            for k in 1..=deg as usize {
                let next = pows[i][k - 1].mul(&f[i]);
                pows[i].push(next);
            }
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let t = pows[0][m[0] as usize]
                .mul(&pows[1][m[1] as usize])
                .mul(&pows[2][m[2] as usize]);
            out = out.add(&t.scale(c));
        }
        out
    }

    /// Exact quotient by `d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            if (0..3).any(|i| m[i] < lm[i]) {
                return None;
            }
            let qm = [m[0] - lm[0], m[1] - lm[1], m[2] - lm[2]];
            let qc = c * &lc_inv;
            let step = Poly::monomial(qm, qc);
            rem = rem.sub(&step.mul(d));
            quot = quot.add(&step);
        }
        Some(quot)
    }

    /// Substitutes `x_i ↦ x_i + p_i·x_k` for `i ≠ k`, moving the point `p`
    /// (with `p_k = 1`) to the coordinate point `e_k`.
    pub fn translate_to_vertex(&self, p: &[Q3; 3], k: usize) -> Poly {
        let f: [Poly; 3] = std::array::from_fn(|i| {
            if i == k {
                Poly::var(k)
            } else {
                Poly::var(i).add(&Poly::var(k).scale(&p[i]))
            }
        });
        self.compose(&f)
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})x^{}y^{}w^{}", m[0], m[1], m[2])?;
        }
        Ok(())
    }
}
