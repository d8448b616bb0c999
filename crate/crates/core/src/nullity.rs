//! Solving `R(X,Y)ξ = κ(η(Y)X − η(X)Y) + μ(η(Y)hX − η(X)hY)` for rational
//! constants κ, μ, and the companion law `h² = (κ+1)φ²`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::frame::FrameVector;
use crate::scalar::{AlgNum, Scalar};
use crate::structure::{CheckResult, ParacontactStructure, VerificationReport, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NullityStatus {
    /// Exactly one rational pair satisfies the condition.
    Unique,
    /// h ≡ 0, so μ multiplies zero and only κ is determined.
    MuIndeterminate,
    /// No rational pair satisfies the condition.
    Inconsistent,
    /// Solutions exist but the equations do not pin them down, with h ≠ 0.
    Underdetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum MuValue {
    #[serde(serialize_with = "ser_rational")]
    Value(BigRational),
    Indeterminate,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    KappaAboveMinusOne,
    KappaBelowMinusOne,
    /// κ = −1, equivalent to h² = 0; `h_vanishes` records whether h ≡ 0.
    KappaMinusOne { h_vanishes: bool },
    NotApplicable,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::KappaAboveMinusOne => write!(f, "kappa > -1"),
            CaseTag::KappaBelowMinusOne => write!(f, "kappa < -1"),
            CaseTag::KappaMinusOne { h_vanishes: true } => write!(f, "kappa = -1 with h = 0"),
            CaseTag::KappaMinusOne { h_vanishes: false } => write!(f, "kappa = -1 with h^2 = 0 but h != 0"),
            CaseTag::NotApplicable => write!(f, "n/a"),
        }
    }
}

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

fn ser_opt_rational<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&rational_string(q)),
        None => s.serialize_none(),
    }
}

pub(crate) fn rational_string(q: &BigRational) -> String {
    AlgNum::from_rational(q.clone()).to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullityResult {
    #[serde(serialize_with = "ser_opt_rational")]
    pub kappa: Option<BigRational>,
    pub mu: MuValue,
    pub status: NullityStatus,
    /// Nonzero residual components at the best candidate, when inconsistent.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<Witness>,
    pub h_vanishes: bool,
    pub case: CaseTag,
}

impl NullityResult {
    pub fn mu_value(&self) -> Option<&BigRational> {
        match &self.mu {
            MuValue::Value(m) => Some(m),
            _ => None,
        }
    }

    /// `(κ, μ)` when both are uniquely determined.
    pub fn pair(&self) -> Option<(BigRational, BigRational)> {
        match (&self.kappa, &self.mu, self.status) {
            (Some(k), MuValue::Value(m), NullityStatus::Unique) => Some((k.clone(), m.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for NullityResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.kappa.as_ref().map_or("none".to_string(), rational_string);
        let m = match &self.mu {
            MuValue::Value(m) => rational_string(m),
            MuValue::Indeterminate => "indeterminate".to_string(),
            MuValue::Unknown => "none".to_string(),
        };
        let status = match self.status {
            NullityStatus::Unique => "unique",
            NullityStatus::MuIndeterminate => "mu indeterminate",
            NullityStatus::Inconsistent => "inconsistent",
            NullityStatus::Underdetermined => "underdetermined",
        };
        write!(f, "(kappa, mu) = ({k}, {m}) [{status}; {}]", self.case)?;
        for w in &self.residuals {
            write!(f, "\n  residual {} = {}", w.location, w.value)?;
        }
        Ok(())
    }
}

/// One rational equation `a κ + b μ = c`.
struct Equation {
    a: BigRational,
    b: BigRational,
    c: BigRational,
}

/// The residual vectors `R(e_i,e_j)ξ`, `η(e_j)e_i − η(e_i)e_j` and
/// `η(e_j)he_i − η(e_i)he_j` for every pair `i < j`.
fn pair_terms(s: &ParacontactStructure) -> Vec<((usize, usize), FrameVector, FrameVector, FrameVector)> {
    let dim = s.dim();
    let eta = s.eta();
    let h = s.h();
    let r = s.curvature();
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let a = s.basis(i).scale_const(&eta[j]).sub(&s.basis(j).scale_const(&eta[i]));
            let b = h.column(i).scale_const(&eta[j]).sub(&h.column(j).scale_const(&eta[i]));
            out.push(((i, j), r.apply(i, j, 0).clone(), a, b));
        }
    }
    out
}

/// `R(e_i,e_j)ξ − κ A_ij − μ B_ij`.
fn residual(r: &FrameVector, a: &FrameVector, b: &FrameVector, kappa: &AlgNum, mu: &AlgNum) -> FrameVector {
    r.sub(&a.scale_const(kappa)).sub(&b.scale_const(mu))
}

fn equations(terms: &[((usize, usize), FrameVector, FrameVector, FrameVector)]) -> Vec<Equation> {
    let mut eqs = Vec::new();
    for (_, r, a, b) in terms {
        for k in 0..r.dim() {
            let (rk, ak, bk) = (r.component(k), a.component(k), b.component(k));
            let mut keys: Vec<_> = rk.terms().map(|(e, _)| e.clone()).collect();
            keys.extend(ak.terms().map(|(e, _)| e.clone()));
            keys.extend(bk.terms().map(|(e, _)| e.clone()));
            keys.sort();
            keys.dedup();
            let coeff = |s: &Scalar, e| s.terms().find(|(x, _)| *x == e).map(|(_, c)| c.clone()).unwrap_or_else(AlgNum::zero);
            for e in &keys {
                let (rc, ac, bc) = (coeff(rk, e), coeff(ak, e), coeff(bk, e));
                // separate the rational and sqrt2 parts: κ, μ are rational
                eqs.push(Equation { a: ac.rational_part().clone(), b: bc.rational_part().clone(), c: rc.rational_part().clone() });
                eqs.push(Equation { a: ac.sqrt2_part().clone(), b: bc.sqrt2_part().clone(), c: rc.sqrt2_part().clone() });
            }
        }
    }
    eqs.retain(|e| !(e.a.is_zero() && e.b.is_zero() && e.c.is_zero()));
    eqs
}

/// A candidate `(κ, μ)` from the equations, plus the rank of the
/// coefficient matrix.
fn candidate(eqs: &[Equation]) -> (usize, BigRational, BigRational) {
    let zero = BigRational::zero();
    let first = eqs.iter().position(|e| !(e.a.is_zero() && e.b.is_zero()));
    let Some(p) = first else {
        return (0, zero.clone(), zero);
    };
    let e1 = &eqs[p];
    let second = eqs.iter().find(|e| &e1.a * &e.b - &e1.b * &e.a != zero);
    match second {
        Some(e2) => {
            let det = &e1.a * &e2.b - &e1.b * &e2.a;
            let k = (&e1.c * &e2.b - &e1.b * &e2.c) / &det;
            let m = (&e1.a * &e2.c - &e1.c * &e2.a) / &det;
            (2, k, m)
        }
        None if !e1.a.is_zero() => (1, &e1.c / &e1.a, zero),
        None => (1, zero, &e1.c / &e1.b),
    }
}

pub fn solve_kappa_mu(s: &ParacontactStructure) -> NullityResult {
    let terms = pair_terms(s);
    let eqs = equations(&terms);
    let h_vanishes = s.h().is_zero();
    let (rank, k, m) = candidate(&eqs);
    let consistent = eqs.iter().all(|e| &e.a * &k + &e.b * &m == e.c);
    let mu_free = eqs.iter().all(|e| e.b.is_zero());
    let kappa_free = eqs.iter().all(|e| e.a.is_zero());

    let (kc, mc) = (k.clone(), m.clone());
    let (kappa, mu, status) = if !consistent {
        (None, MuValue::Unknown, NullityStatus::Inconsistent)
    } else if rank == 2 {
        (Some(k), MuValue::Value(m), NullityStatus::Unique)
    } else if mu_free && !kappa_free && h_vanishes {
        (Some(k), MuValue::Indeterminate, NullityStatus::MuIndeterminate)
    } else if mu_free && !kappa_free {
        (Some(k), MuValue::Unknown, NullityStatus::Underdetermined)
    } else if kappa_free && !mu_free {
        (None, MuValue::Value(m), NullityStatus::Underdetermined)
    } else {
        (None, MuValue::Unknown, NullityStatus::Underdetermined)
    };

    let mut residuals = Vec::new();
    if status == NullityStatus::Inconsistent {
        let (ka, ma) = (AlgNum::from_rational(kc), AlgNum::from_rational(mc));
        for ((i, j), r, a, b) in &terms {
            let res = residual(r, a, b, &ka, &ma);
            for c in 0..res.dim() {
                if !res.component(c).is_zero() {
                    residuals.push(Witness {
                        location: format!("(R({}, {}) xi - nullity)[{}]", s.label(*i), s.label(*j), s.label(c)),
                        value: res.component(c).clone(),
                    });
                }
            }
        }
    }
    let mut result = NullityResult { kappa, mu, status, residuals, h_vanishes, case: CaseTag::NotApplicable };
    result.case = classify_case(&result);
    result
}

/// Substitutes `(κ, μ)` and returns the first nonzero residual component,
/// if any.
pub fn nullity_residual(s: &ParacontactStructure, kappa: &BigRational, mu: &BigRational) -> Option<Witness> {
    let (ka, ma) = (AlgNum::from_rational(kappa.clone()), AlgNum::from_rational(mu.clone()));
    for ((i, j), r, a, b) in pair_terms(s) {
        let res = residual(&r, &a, &b, &ka, &ma);
        if let Some(c) = (0..res.dim()).find(|&c| !res.component(c).is_zero()) {
            return Some(Witness {
                location: format!("(R({}, {}) xi - nullity)[{}]", s.label(i), s.label(j), s.label(c)),
                value: res.component(c).clone(),
            });
        }
    }
    None
}

/// `h² = (κ + 1) φ²` componentwise.
pub fn check_h_squared(s: &ParacontactStructure, kappa: &BigRational) -> VerificationReport {
    let dim = s.dim();
    let h2 = s.h().squared();
    let factor = AlgNum::from_rational(kappa + BigRational::one());
    let phi2 = s.phi().mul(s.phi()).scale(&factor).to_scalars();
    let mut r = VerificationReport::new(format!("h^2 = (kappa+1) phi^2 with kappa = {}: {}", rational_string(kappa), s.name()));
    r.push(CheckResult::residuals(
        format!("h^2 = ({}) phi^2", rational_string(&(kappa + BigRational::one()))),
        (0..dim).flat_map(|j| (0..dim).map(move |k| (j, k))).map(|(j, k)| {
            (
                format!("(h^2 - (kappa+1) phi^2)({})[{}]", s.label(j), s.label(k)),
                h2.get(k, j) - phi2.get(k, j),
            )
        }),
    ));
    r
}

/// Sorts a solved (or partially solved) result into the κ > −1, κ < −1 and
/// κ = −1 cases.
pub fn classify_case(result: &NullityResult) -> CaseTag {
    if result.status == NullityStatus::Inconsistent {
        return CaseTag::NotApplicable;
    }
    let Some(k) = &result.kappa else {
        return CaseTag::NotApplicable;
    };
    let shifted = k + BigRational::one();
    if shifted.is_zero() {
        CaseTag::KappaMinusOne { h_vanishes: result.h_vanishes }
    } else if shifted.is_positive() {
        CaseTag::KappaAboveMinusOne
    } else {
        CaseTag::KappaBelowMinusOne
    }
}

/// Rank of the frame matrix of h over the function field, i.e. at a generic
/// point; used for constant-rank examples.
pub fn generic_h_rank(s: &ParacontactStructure) -> Option<usize> {
    let m = s.h().matrix();
    if m.entries().all(|(_, _, e)| e.is_constant()) {
        Some(m.map(|e| e.as_constant().expect("constant")).rank())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::catalog::instantiate_builtin;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn builtin(name: &str, params: &[(&str, i64)]) -> ParacontactStructure {
        let p: BTreeMap<String, i64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        instantiate_builtin(name, &p).unwrap()
    }

    #[test]
    fn nonconstant_examples() {
        let r = solve_kappa_mu(&builtin("ex-mu2-nonconstant", &[]));
        assert_eq!(r.pair(), Some((q(-1), q(2))));
        assert_eq!(r.case, CaseTag::KappaMinusOne { h_vanishes: false });
        let r = solve_kappa_mu(&builtin("ex-mu0-nonconstant", &[]));
        assert_eq!(r.pair(), Some((q(-1), q(0))));
    }

    #[test]
    fn vanishing_h_leaves_mu_free() {
        let r = solve_kappa_mu(&builtin("parasasakian-heisenberg", &[("n", 2)]));
        assert_eq!(r.status, NullityStatus::MuIndeterminate);
        assert_eq!(r.kappa, Some(q(-1)));
        assert_eq!(r.mu, MuValue::Indeterminate);
        assert_eq!(r.case, CaseTag::KappaMinusOne { h_vanishes: true });
    }

    #[test]
    fn h_squared_law() {
        let s = builtin("ex-mu2-nonconstant", &[]);
        assert!(check_h_squared(&s, &q(-1)).passed());
        let r = check_h_squared(&s, &q(0));
        assert!(!r.passed());
        assert!(r.checks[0].witness.is_some());
        assert!(check_h_squared(&builtin("ex-mu2-hm-n", &[("n", 3), ("m", 2)]), &q(-1)).passed());
    }

    #[test]
    fn case_tags() {
        let mk = |k: i64| NullityResult {
            kappa: Some(q(k)),
            mu: MuValue::Value(q(0)),
            status: NullityStatus::Unique,
            residuals: vec![],
            h_vanishes: false,
            case: CaseTag::NotApplicable,
        };
        assert_eq!(classify_case(&mk(-2)), CaseTag::KappaBelowMinusOne);
        assert_eq!(classify_case(&mk(0)), CaseTag::KappaAboveMinusOne);
        assert_eq!(classify_case(&mk(-1)), CaseTag::KappaMinusOne { h_vanishes: false });
    }

    #[test]
    fn inconsistent_structure_reports_residuals() {
        // e1 = dx + x*z^2*dy - 2*y*dz: R(e1, xi)xi is not a constant
        // combination of e1 and h e1
        let doc = "[chart]\nx y z\n[frame]\nlabels xi e1 e2\nvector xi = dz\n\
                   vector e1 = dx + x*z^2*dy - 2*y*dz\nvector e2 = dy\n[metric]\ng xi xi = 1\n\
                   g e1 e2 = 1\n[phi]\nphi e1 = e1\nphi e2 = -e2\n[eta]\neta xi = 1\n";
        let s = crate::catalog::load_document(doc).unwrap();
        let r = solve_kappa_mu(&s);
        assert_eq!(r.status, NullityStatus::Inconsistent, "{r}");
        assert!(!r.residuals.is_empty());
        assert!(r.residuals.iter().all(|w| !w.value.is_zero()));
        assert_eq!(r.case, CaseTag::NotApplicable);
    }
}
