use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// An element `a + b√3` of ℚ(√3), with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Q3 {
    a: BigRational,
    b: BigRational,
}

impl Q3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// The rational `n / d`; panics on `d = 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::new(BigRational::new(BigInt::from(n), BigInt::from(d)), BigRational::zero())
    }

    /// `(n / d)·√3`.
    pub fn sqrt3_times(n: i64, d: i64) -> Self {
        Self::new(BigRational::zero(), BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sqrt3() -> Self {
        Self::sqrt3_times(1, 1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt3_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign, using `a² ≶ 3b²` when the parts disagree.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, y) => {
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * BigRational::from_integer(3.into());
                if a2 > b2 {
                    x
                } else {
                    y
                }
            }
        }
    }

    /// Inverse via the conjugate `a − b√3`; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(3.into());
        if norm.is_zero() {
            return None;
        }
        Some(Self::new(&self.a / &norm, -&self.b / &norm))
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3f64.sqrt()
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Q3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a.numer(), self.a.denom())?;
        if !self.b.is_zero() {
            write!(f, "+{}/{}*s3", self.b.numer(), self.b.denom())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Q3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator {n:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator {d:?}"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for Q3 {
    type Err = String;

    /// Parses `num/den`, `num/den+num/den*s3` or the integer shorthands.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        // the sqrt part is always introduced by a '+' after the rational part
        let split = s.char_indices().skip(1).find(|&(_, c)| c == '+').map(|(i, _)| i);
        match split {
            Some(i) => {
                let irr = s[i + 1..]
                    .trim()
                    .strip_suffix("*s3")
                    .ok_or_else(|| format!("expected '*s3' in {s:?}"))?;
                Ok(Self::new(parse_rational(&s[..i])?, parse_rational(irr)?))
            }
            None => match s.strip_suffix("*s3") {
                Some(irr) => Ok(Self::new(BigRational::zero(), parse_rational(irr)?)),
                None => Ok(Self::new(parse_rational(s)?, BigRational::zero())),
            },
        }
    }
}

impl From<i64> for Q3 {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<BigRational> for Q3 {
    fn from(a: BigRational) -> Self {
        Self::new(a, BigRational::zero())
    }
}

impl Add for &Q3 {
    type Output = Q3;
    fn add(self, o: &Q3) -> Q3 {
        Q3::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &Q3 {
    type Output = Q3;
    fn sub(self, o: &Q3) -> Q3 {
        Q3::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &Q3 {
    type Output = Q3;
    fn mul(self, o: &Q3) -> Q3 {
        let three = BigRational::from_integer(3.into());
        Q3::new(&self.a * &o.a + &self.b * &o.b * three, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Div for &Q3 {
    type Output = Q3;
    fn div(self, o: &Q3) -> Q3 {
        self * &o.inv().expect("division by zero in Q(√3)")
    }
}

impl Neg for &Q3 {
    type Output = Q3;
    fn neg(self) -> Q3 {
        Q3::new(-&self.a, -&self.b)
    }
}

impl Neg for Q3 {
    type Output = Q3;
    fn neg(self) -> Q3 {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Q3 {
            type Output = Q3;
            fn $m(self, o: Q3) -> Q3 { (&self).$m(&o) }
        }
        impl $tr<&Q3> for Q3 {
            type Output = Q3;
            fn $m(self, o: &Q3) -> Q3 { (&self).$m(o) }
        }
        impl $tr<Q3> for &Q3 {
            type Output = Q3;
            fn $m(self, o: Q3) -> Q3 { self.$m(&o) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Zero for Q3 {
    fn zero() -> Self {
        Q3::zero()
    }
    fn is_zero(&self) -> bool {
        Q3::is_zero(self)
    }
}

impl One for Q3 {
    fn one() -> Self {
        Q3::one()
    }
}

impl PartialOrd for Q3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q3 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}
