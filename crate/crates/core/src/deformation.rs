//! `D_c`-homothetic deformations:
//! `φ' = φ`, `ξ' = ξ/c`, `η' = cη`, `g' = cg + c(c−1) η⊗η`.
//!
//! The deformed structure lives on the rescaled frame `{ξ/c, e_1, …, e_2n}`
//! so that index 0 is still the Reeb field.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::frame::{FrameError, MetricComponents};
use crate::linalg::Mat;
use crate::nullity::{rational_string, solve_kappa_mu, NullityStatus};
use crate::scalar::AlgNum;
use crate::structure::{verify_structure, CheckResult, ParacontactStructure, StructureError, VerificationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformationError {
    #[error("the deformation constant c must be nonzero")]
    ZeroConstant,
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationParams {
    #[serde(serialize_with = "ser_c")]
    c: BigRational,
}

fn ser_c<S: serde::Serializer>(c: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(c))
}

impl DeformationParams {
    pub fn new(c: BigRational) -> Result<Self, DeformationError> {
        if c.is_zero() {
            return Err(DeformationError::ZeroConstant);
        }
        Ok(DeformationParams { c })
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }
}

pub fn deform(s: &ParacontactStructure, c: &BigRational) -> Result<ParacontactStructure, DeformationError> {
    let params = DeformationParams::new(c.clone())?;
    let c = AlgNum::from_rational(params.c.clone());
    let dim = s.dim();
    let inv_c = c.inverse().expect("nonzero");
    let scales: Vec<AlgNum> = (0..dim).map(|i| if i == 0 { inv_c.clone() } else { AlgNum::one() }).collect();
    let frame = s.frame().rescaled(&scales)?;

    let eta = s.eta();
    let g = s.metric().matrix();
    let c_c1 = &c * &(&c - &AlgNum::one());
    let metric = Mat::from_fn(dim, dim, |i, j| {
        let old = &(&c * g.get(i, j)) + &(&c_c1 * &(&eta[i] * &eta[j]));
        &(&scales[i] * &scales[j]) * &old
    });
    // φ' e'_j = s_j φ e_j = Σ_k (s_j / s_k) φ_kj e'_k
    let phi = Mat::from_fn(dim, dim, |k, j| {
        let ratio = &scales[j] / &scales[k];
        &ratio * s.phi().get(k, j)
    });
    let eta_new: Vec<AlgNum> = (0..dim).map(|j| &(&scales[j] * &c) * &eta[j]).collect();
    let name = format!("D_{}({})", rational_string(&params.c), s.name());
    Ok(ParacontactStructure::new(name, frame, MetricComponents::new(metric)?, phi, eta_new)?)
}

/// `κ' = (κ + 1 − c²)/c²`, `μ' = (μ − 2 + 2c)/c`.
pub fn deform_kappa_mu(
    kappa: &BigRational,
    mu: &BigRational,
    c: &BigRational,
) -> Result<(BigRational, BigRational), DeformationError> {
    if c.is_zero() {
        return Err(DeformationError::ZeroConstant);
    }
    let one = BigRational::one();
    let two = &one + &one;
    let c2 = c * c;
    let k = (kappa + &one - &c2) / &c2;
    let m = (mu - &two + &two * c) / c;
    Ok((k, m))
}

fn kappa_only(kappa: &BigRational, c: &BigRational) -> BigRational {
    let one = BigRational::one();
    let c2 = c * c;
    (kappa + &one - &c2) / &c2
}

/// Deforms `s`, recomputes everything on the result, and compares the
/// recomputed `(κ', μ')` with [`deform_kappa_mu`].
pub fn verify_deformation_consistency(s: &ParacontactStructure, c: &BigRational) -> VerificationReport {
    let mut r = VerificationReport::new(format!("D_{} deformation of {}", rational_string(c), s.name()));
    let before = solve_kappa_mu(s);
    let deformed = match deform(s, c) {
        Ok(d) => d,
        Err(e) => {
            r.push(CheckResult::fail("deformation is defined", e.to_string(), crate::scalar::Scalar::one()));
            return r;
        }
    };
    let structure = verify_structure(&deformed);
    r.absorb(structure);
    let after = solve_kappa_mu(&deformed);
    match (before.status, &before.kappa) {
        (NullityStatus::Unique, Some(_)) => {
            let (k, m) = before.pair().expect("unique");
            let (ek, em) = deform_kappa_mu(&k, &m, c).expect("nonzero c");
            r.push(match after.pair() {
                Some((ak, am)) if ak == ek && am == em => CheckResult::pass(format!(
                    "recomputed (kappa', mu') = ({}, {}) matches the law",
                    rational_string(&ak),
                    rational_string(&am)
                )),
                _ => CheckResult::fail(
                    format!("recomputed (kappa', mu') matches ({}, {})", rational_string(&ek), rational_string(&em)),
                    format!("recomputed {after}"),
                    crate::scalar::Scalar::one(),
                ),
            });
        }
        (NullityStatus::MuIndeterminate, Some(k)) => {
            let ek = kappa_only(k, c);
            let ok = after.status == NullityStatus::MuIndeterminate && after.kappa.as_ref() == Some(&ek);
            r.push(if ok {
                CheckResult::pass(format!("recomputed kappa' = {} matches the law, h' = 0", rational_string(&ek)))
            } else {
                CheckResult::fail(
                    format!("recomputed kappa' matches {} with h' = 0", rational_string(&ek)),
                    format!("recomputed {after}"),
                    crate::scalar::Scalar::one(),
                )
            });
        }
        _ => r.push(CheckResult::fail(
            "source (kappa, mu) is determined",
            format!("source {before}"),
            crate::scalar::Scalar::one(),
        )),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::catalog::instantiate_builtin;
    use crate::nullity::solve_kappa_mu;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn builtin(name: &str, params: &[(&str, i64)]) -> ParacontactStructure {
        let p: BTreeMap<String, i64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        instantiate_builtin(name, &p).unwrap()
    }

    #[test]
    fn law_values() {
        assert_eq!(deform_kappa_mu(&q(-1, 1), &q(0, 1), &q(2, 1)).unwrap(), (q(-1, 1), q(1, 1)));
        // c = 1 - mu/2 sends (-1, mu) to (-1, 0)
        let mu = q(5, 3);
        let c = q(1, 1) - &mu / q(2, 1);
        assert_eq!(deform_kappa_mu(&q(-1, 1), &mu, &c).unwrap(), (q(-1, 1), q(0, 1)));
        assert_eq!(deform_kappa_mu(&q(-1, 1), &q(2, 1), &q(-7, 4)).unwrap().1, q(2, 1));
        assert!(deform_kappa_mu(&q(0, 1), &q(0, 1), &q(0, 1)).is_err());
    }

    #[test]
    fn identity_and_composition() {
        let s = builtin("ex-mu2-nonconstant", &[]);
        assert_eq!(deform(&s, &q(1, 1)).unwrap(), s);
        let twice = deform(&deform(&s, &q(2, 1)).unwrap(), &q(3, 1)).unwrap();
        assert_eq!(twice, deform(&s, &q(6, 1)).unwrap());
        assert!(matches!(deform(&s, &q(0, 1)), Err(DeformationError::ZeroConstant)));
    }

    #[test]
    fn metric_expansion() {
        // g'' = c2 g' + c2(c2-1) eta' (x) eta' with eta' = c1 eta, expanded by hand
        let s = builtin("ex-mu0-h1", &[("n", 1)]);
        let d = deform(&s, &q(-3, 2)).unwrap();
        // on e1, e2 the metric scales by c; xi' stays unit
        assert_eq!(d.metric().matrix().get(0, 0), &AlgNum::one());
        assert_eq!(d.metric().matrix().get(1, 2), &(&AlgNum::from_ratio(-3, 2) * s.metric().matrix().get(1, 2)));
    }

    #[test]
    fn consistency_reports() {
        let s = builtin("ex-mu2-nonconstant", &[]);
        let r = verify_deformation_consistency(&s, &q(3, 1));
        assert!(r.passed(), "{r}");
        let s = builtin("ex-mu0-nonconstant", &[]);
        let r = verify_deformation_consistency(&s, &q(2, 1));
        assert!(r.passed(), "{r}");
        assert_eq!(solve_kappa_mu(&deform(&s, &q(2, 1)).unwrap()).pair(), Some((q(-1, 1), q(1, 1))));
        let s = builtin("parasasakian-heisenberg", &[("n", 1)]);
        let r = verify_deformation_consistency(&s, &q(-5, 3));
        assert!(r.passed(), "{r}");
    }
}
