use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::algnum::{rational_to_f64, AlgNum};

/// Exponent data of a monomial `Π c^k · exp(Σ q·c)`.
///
/// Zero powers and zero rates are never stored, so two keys compare equal
/// exactly when they describe the same function.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Exponents {
    pub(crate) powers: BTreeMap<String, u32>,
    pub(crate) rates: BTreeMap<String, BigRational>,
}

impl Exponents {
    pub fn powers(&self) -> &BTreeMap<String, u32> {
        &self.powers
    }

    pub fn rates(&self) -> &BTreeMap<String, BigRational> {
        &self.rates
    }

    pub fn is_constant(&self) -> bool {
        self.powers.is_empty() && self.rates.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.values().sum()
    }

    fn combine(&self, other: &Exponents) -> Exponents {
        let mut powers = self.powers.clone();
        for (c, k) in &other.powers {
            *powers.entry(c.clone()).or_insert(0) += k;
        }
        let mut rates = self.rates.clone();
        for (c, q) in &other.rates {
            let entry = rates.entry(c.clone()).or_insert_with(BigRational::zero);
            *entry += q;
        }
        rates.retain(|_, q| !q.is_zero());
        Exponents { powers, rates }
    }

    /// Coordinates that appear in this key.
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.powers.keys().chain(self.rates.keys()).map(String::as_str)
    }
}

/// One term `coeff · Π c^k · exp(Σ q·c)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial {
    pub coeff: AlgNum,
    pub exponents: Exponents,
}

impl Monomial {
    pub fn constant(coeff: AlgNum) -> Self {
        Monomial { coeff, exponents: Exponents::default() }
    }

    pub fn variable(name: &str) -> Self {
        let mut powers = BTreeMap::new();
        powers.insert(name.to_string(), 1);
        Monomial { coeff: AlgNum::one(), exponents: Exponents { powers, rates: BTreeMap::new() } }
    }

    pub fn exp(name: &str, rate: BigRational) -> Self {
        let mut rates = BTreeMap::new();
        if !rate.is_zero() {
            rates.insert(name.to_string(), rate);
        }
        Monomial { coeff: AlgNum::one(), exponents: Exponents { powers: BTreeMap::new(), rates } }
    }
}

/// An exact function of the chart coordinates: a finite sum of monomials
/// with coefficients in ℚ(√2), kept in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Exponents, AlgNum>,
}

/// Result of evaluating a [`Scalar`] at a rational point.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(AlgNum),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(a) => a.to_f64(),
            Value::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&AlgNum> {
        match self {
            Value::Exact(a) => Some(a),
            Value::Approx(_) => None,
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::constant(AlgNum::one())
    }

    pub fn constant(c: AlgNum) -> Self {
        Scalar::from_monomial(Monomial::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::constant(AlgNum::from_int(n))
    }

    pub fn variable(name: &str) -> Self {
        Scalar::from_monomial(Monomial::variable(name))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut s = Scalar::zero();
        s.add_term(m.exponents, m.coeff);
        s
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut s = Scalar::zero();
        for m in ms {
            s.add_term(m.exponents, m.coeff);
        }
        s
    }

    fn add_term(&mut self, key: Exponents, coeff: AlgNum) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials in canonical form.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical terms in monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &AlgNum)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms
            .iter()
            .map(|(e, c)| Monomial { coeff: c.clone(), exponents: e.clone() })
    }

    /// The value when this scalar has no coordinate dependence.
    pub fn as_constant(&self) -> Option<AlgNum> {
        match self.terms.len() {
            0 => Some(AlgNum::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponents::is_constant)
    }

    /// All coordinate names this scalar depends on.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|e| e.variables().map(str::to_string))
            .collect()
    }

    pub fn scale(&self, c: &AlgNum) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Multiplicative inverse when this scalar is a unit of the ring, i.e. a
    /// single monomial `c · exp(Σ q·x)` without polynomial factors.
    pub fn unit_inverse(&self) -> Option<Scalar> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if !e.powers.is_empty() {
            return None;
        }
        let rates = e.rates.iter().map(|(k, q)| (k.clone(), -q.clone())).collect();
        let mut s = Scalar::zero();
        s.add_term(Exponents { powers: BTreeMap::new(), rates }, c.inverse()?);
        Some(s)
    }

    /// `∂/∂coord`, term by term: `d/dc (c^k e^{qc}) = (k c^{k−1} + q c^k) e^{qc}`.
    pub fn partial_derivative(&self, coord: &str) -> Scalar {
        let mut out = Scalar::zero();
        for (e, c) in &self.terms {
            if let Some(&k) = e.powers.get(coord) {
                let mut d = e.clone();
                if k == 1 {
                    d.powers.remove(coord);
                } else {
                    d.powers.insert(coord.to_string(), k - 1);
                }
                out.add_term(d, c * &AlgNum::from_int(k as i64));
            }
            if let Some(q) = e.rates.get(coord) {
                out.add_term(e.clone(), c * &AlgNum::from_rational(q.clone()));
            }
        }
        out
    }

    /// Evaluates at a rational point. The result is exact when every
    /// exponential factor has a zero argument there; otherwise it is a
    /// double-precision approximation (relative error about 1e-15 per term).
    /// Coordinates missing from `point` are treated as 0.
    pub fn evaluate(&self, point: &BTreeMap<String, BigRational>) -> Value {
        let zero = BigRational::zero();
        let coord = |c: &str| point.get(c).unwrap_or(&zero);
        let exact = self
            .terms
            .keys()
            .all(|e| e.rates.iter().all(|(c, q)| (q * coord(c)).is_zero()));
        if exact {
            let mut sum = AlgNum::zero();
            for (e, c) in &self.terms {
                let mut t = c.clone();
                for (v, k) in &e.powers {
                    t = t * AlgNum::from_rational(num_traits::pow(coord(v).clone(), *k as usize));
                }
                sum += &t;
            }
            Value::Exact(sum)
        } else {
            let mut sum = 0.0;
            for (e, c) in &self.terms {
                let mut t = c.to_f64();
                for (v, k) in &e.powers {
                    t *= rational_to_f64(coord(v)).powi(*k as i32);
                }
                let arg: f64 = e.rates.iter().map(|(v, q)| rational_to_f64(&(q * coord(v)))).sum();
                sum += t * arg.exp();
            }
            Value::Approx(sum)
        }
    }

    /// Floating-point evaluation at a real point.
    pub fn evaluate_f64(&self, point: &BTreeMap<String, f64>) -> f64 {
        let coord = |c: &str| point.get(c).copied().unwrap_or(0.0);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64();
                for (v, k) in &e.powers {
                    t *= coord(v).powi(*k as i32);
                }
                let arg: f64 = e.rates.iter().map(|(v, q)| rational_to_f64(q) * coord(v)).sum();
                t * arg.exp()
            })
            .sum()
    }

    /// Splits every coefficient `a + b√2` into its rational parts, keyed by
    /// monomial. Two scalars are equal iff all these parts are equal.
    pub fn rational_coordinates(&self) -> Vec<(Exponents, BigRational, BigRational)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.rational_part().clone(), c.sqrt2_part().clone()))
            .collect()
    }
}

fn write_factor_list(e: &Exponents, f: &mut fmt::Formatter<'_>, mut first: bool) -> fmt::Result {
    for (v, k) in &e.powers {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if *k == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{k}")?;
        }
    }
    for (v, q) in &e.rates {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if q.is_one() {
            write!(f, "exp({v})")?;
        } else if (-q.clone()).is_one() {
            write!(f, "exp(-{v})")?;
        } else if q.is_integer() {
            write!(f, "exp({}*{v})", q.numer())?;
        } else {
            write!(f, "exp({}/{}*{v})", q.numer(), q.denom())?;
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mixed = c.has_both_parts();
            let negative = !mixed && c.is_negative();
            let shown = if negative { -c.clone() } else { c.clone() };
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e.is_constant() {
                if mixed && idx > 0 {
                    write!(f, "({shown})")?;
                } else {
                    write!(f, "{shown}")?;
                }
            } else if shown.is_one() {
                write_factor_list(e, f, true)?;
            } else {
                if mixed {
                    write!(f, "({shown})")?;
                } else {
                    write!(f, "{shown}")?;
                }
                write_factor_list(e, f, false)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for AlgNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<AlgNum> for Scalar {
    fn from(c: AlgNum) -> Self {
        Scalar::constant(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.combine(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut out = Scalar::zero();
        for s in iter {
            out += &s;
        }
        out
    }
}

/// Builds a rational point from integer coordinates.
pub fn int_point(coords: &[(&str, i64)]) -> BTreeMap<String, BigRational> {
    coords
        .iter()
        .map(|(c, v)| (c.to_string(), BigRational::from_integer(BigInt::from(*v))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Scalar {
        Scalar::variable("x")
    }

    fn e(rate: i64, c: &str) -> Scalar {
        Scalar::from_monomial(Monomial::exp(c, BigRational::from_integer(rate.into())))
    }

    #[test]
    fn additive_inverse_is_zero() {
        assert!((x() + (-x())).is_zero());
    }

    #[test]
    fn exponential_rates_add() {
        assert_eq!(e(-2, "z") * e(-2, "z"), e(-4, "z"));
        assert_eq!((e(-2, "z") * e(2, "z")), Scalar::one());
    }

    #[test]
    fn derivative_rules() {
        let s = x() * e(-2, "z");
        assert_eq!(s.partial_derivative("z"), s.scale(&AlgNum::from_int(-2)));
        let xz = x() * Scalar::variable("z");
        assert!(xz.partial_derivative("y").is_zero());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        // d/dx (x² e^x) = (2x + x²) e^x; central differences at x = 0.7
        let s = x().pow(2) * e(1, "x");
        let d = s.partial_derivative("x");
        let h = 1e-5;
        let at = |v: f64| s.evaluate_f64(&[("x".to_string(), v)].into_iter().collect());
        let fd = (at(0.7 + h) - at(0.7 - h)) / (2.0 * h);
        let exact = d.evaluate_f64(&[("x".to_string(), 0.7)].into_iter().collect());
        assert!((fd - exact).abs() < 1e-8, "{fd} vs {exact}");
        let expected = (x().scale(&AlgNum::from_int(2)) + x().pow(2)) * e(1, "x");
        assert_eq!(d, expected);
    }

    #[test]
    fn evaluation_exactness() {
        let s = x() * e(-2, "z");
        assert_eq!(s.evaluate(&int_point(&[("x", 1), ("y", 0), ("z", 0)])), Value::Exact(AlgNum::one()));
        match s.evaluate(&int_point(&[("x", 1), ("y", 0), ("z", 1)])) {
            Value::Approx(v) => assert!((v - (-2.0f64).exp()).abs() < 1e-15),
            other => panic!("expected approximation, got {other:?}"),
        }
        let xz = x() * Scalar::variable("z");
        assert_eq!(xz.evaluate(&int_point(&[("x", 2), ("y", 0), ("z", 3)])), Value::Exact(AlgNum::from_int(6)));
        let r2 = Scalar::constant(AlgNum::sqrt2()).evaluate(&int_point(&[("x", 5)])).to_f64();
        assert!((r2 - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn unit_inverse_of_exponential() {
        let u = e(-2, "z").scale(&AlgNum::from_int(3));
        let inv = u.unit_inverse().unwrap();
        assert_eq!(&u * &inv, Scalar::one());
        assert!(x().unit_inverse().is_none());
    }

    #[test]
    fn printing() {
        let s = x() * e(-2, "z").scale(&AlgNum::from_int(-2));
        assert_eq!(s.to_string(), "-2*x*exp(-2*z)");
        assert_eq!(Scalar::zero().to_string(), "0");
        let t = Scalar::one() + x();
        assert_eq!(t.to_string(), "1 + x");
    }
}
