use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element `a + b·√2` of the field ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AlgNum {
    a: BigRational,
    b: BigRational,
}

/// Exact square root of a non-negative rational, if it is rational.
pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator individually overflow f64
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000) as usize;
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl AlgNum {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        AlgNum { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        AlgNum { a, b: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sqrt2() -> Self {
        AlgNum { a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of √2.
    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, when the √2 part vanishes.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conjugate(&self) -> Self {
        AlgNum { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    /// Exact sign in the real embedding (√2 > 0).
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            (sa, _) => {
                // opposite signs: compare a² with 2b²
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(2.into()) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(AlgNum { a: c.a / &n, b: c.b / n })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self * &inv)
    }

    /// Exact `√|x|` when it lies in ℚ(√2).
    pub fn sqrt_abs(&self) -> Option<Self> {
        let x = self.abs();
        if x.is_zero() {
            return Some(AlgNum::zero());
        }
        let two = BigRational::from_integer(2.into());
        let mut candidates: Vec<BigRational> = Vec::new();
        if x.b.is_zero() {
            if let Some(p) = rational_sqrt(&x.a) {
                return Some(AlgNum::from_rational(p));
            }
            if let Some(q) = rational_sqrt(&(&x.a / &two)) {
                return Some(AlgNum { a: BigRational::zero(), b: q });
            }
            return None;
        }
        // (p + q√2)² = p² + 2q² + 2pq√2, so p² is a root of t² − a t + b²/2
        let disc = rational_sqrt(&x.norm())?;
        for p2 in [(&x.a + &disc) / &two, (&x.a - &disc) / &two] {
            if let Some(p) = rational_sqrt(&p2) {
                if !p.is_zero() {
                    candidates.push(p);
                }
            }
        }
        for p in candidates {
            let q = &x.b / (&two * &p);
            let r = AlgNum { a: p, b: q };
            if &r * &r == x {
                return Some(r.abs());
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * std::f64::consts::SQRT_2
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = AlgNum::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Both the rational and the √2 part are nonzero.
    pub(crate) fn has_both_parts(&self) -> bool {
        !self.a.is_zero() && !self.b.is_zero()
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return fmt_rational(&self.a, f);
        }
        if !self.a.is_zero() {
            fmt_rational(&self.a, f)?;
            f.write_str(if self.b.is_negative() { " - " } else { " + " })?;
        } else if self.b.is_negative() {
            f.write_str("-")?;
        }
        let b = self.b.abs();
        if b.is_one() {
            f.write_str("sqrt2")
        } else {
            fmt_rational(&b, f)?;
            f.write_str("*sqrt2")
        }
    }
}

impl From<i64> for AlgNum {
    fn from(n: i64) -> Self {
        AlgNum::from_int(n)
    }
}

impl From<BigRational> for AlgNum {
    fn from(q: BigRational) -> Self {
        AlgNum::from_rational(q)
    }
}

impl<'a> Add<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;
    fn add(self, rhs: &AlgNum) -> AlgNum {
        AlgNum { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;
    fn sub(self, rhs: &AlgNum) -> AlgNum {
        AlgNum { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;
    fn mul(self, rhs: &AlgNum) -> AlgNum {
        let two = BigRational::from_integer(2.into());
        AlgNum {
            a: &self.a * &rhs.a + two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum { a: -self.a.clone(), b: -self.b.clone() }
    }
}

impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum { a: -self.a, b: -self.b }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, rhs: AlgNum) -> AlgNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, rhs: &AlgNum) -> AlgNum {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// Panics on division by zero, like the rational types it wraps.
impl Div<AlgNum> for AlgNum {
    type Output = AlgNum;
    fn div(self, rhs: AlgNum) -> AlgNum {
        self.checked_div(&rhs).expect("division by zero in Q(sqrt2)")
    }
}

impl<'a> Div<&'a AlgNum> for &'a AlgNum {
    type Output = AlgNum;
    fn div(self, rhs: &AlgNum) -> AlgNum {
        self.checked_div(rhs).expect("division by zero in Q(sqrt2)")
    }
}

impl AddAssign<&AlgNum> for AlgNum {
    fn add_assign(&mut self, rhs: &AlgNum) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&AlgNum> for AlgNum {
    fn sub_assign(&mut self, rhs: &AlgNum) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&AlgNum> for AlgNum {
    fn mul_assign(&mut self, rhs: &AlgNum) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let s = AlgNum::sqrt2();
        assert_eq!(&s * &s, AlgNum::from_int(2));
    }

    #[test]
    fn conjugate_product() {
        // (1+√2)(1−√2) = 1 − 2 = −1, computed on (a,b) pairs by hand
        let x = AlgNum::new(q(1, 1), q(1, 1));
        let y = AlgNum::new(q(1, 1), q(-1, 1));
        assert_eq!(&x * &y, AlgNum::from_int(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = AlgNum::new(q(3, 2), q(-5, 7));
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert!(AlgNum::zero().inverse().is_none());
    }

    #[test]
    fn sign_of_mixed_terms() {
        assert!(AlgNum::new(q(1, 1), q(-1, 1)).is_negative());
        assert!(AlgNum::new(q(-1, 1), q(1, 1)).is_positive());
        assert!(AlgNum::new(q(3, 1), q(-2, 1)).is_positive());
        assert_eq!(AlgNum::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(AlgNum::from_int(2).sqrt_abs(), Some(AlgNum::sqrt2()));
        assert_eq!(AlgNum::from_int(-9).sqrt_abs(), Some(AlgNum::from_int(3)));
        assert_eq!(AlgNum::from_ratio(1, 2).sqrt_abs(), Some(AlgNum::new(q(0, 1), q(1, 2))));
        // (1 + √2)² = 3 + 2√2
        let x = AlgNum::new(q(3, 1), q(2, 1));
        assert_eq!(x.sqrt_abs(), Some(AlgNum::new(q(1, 1), q(1, 1))));
        // 3 − 2√2 = (√2 − 1)²
        let y = AlgNum::new(q(3, 1), q(-2, 1));
        assert_eq!(y.sqrt_abs(), Some(AlgNum::new(q(-1, 1), q(1, 1))));
        assert_eq!(AlgNum::from_int(3).sqrt_abs(), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(AlgNum::from_ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(AlgNum::sqrt2().to_string(), "sqrt2");
        assert_eq!(AlgNum::new(q(1, 1), q(-2, 1)).to_string(), "1 - 2*sqrt2");
        assert_eq!((-AlgNum::sqrt2()).to_string(), "-sqrt2");
    }
}
