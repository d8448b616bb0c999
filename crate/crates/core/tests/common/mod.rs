#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use paracontact::catalog::instantiate_builtin;
use paracontact::frame::FrameVector;
use paracontact::linalg::Mat;
use paracontact::scalar::{parse_scalar, AlgNum, Scalar};
use paracontact::structure::ParacontactStructure;
use rand::Rng;

pub fn builtin(name: &str, params: &[(&str, i64)]) -> ParacontactStructure {
    let p: BTreeMap<String, i64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    instantiate_builtin(name, &p).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `Σ coeff · label` with coefficients parsed over the structure's chart.
pub fn vector(s: &ParacontactStructure, terms: &[(&str, &str)]) -> FrameVector {
    let chart: Vec<String> = s.frame().chart().map(|c| c.coords().to_vec()).unwrap_or_default();
    let chart: Vec<&str> = chart.iter().map(String::as_str).collect();
    let mut comps = vec![Scalar::zero(); s.dim()];
    for (label, coeff) in terms {
        let i = s.frame().index_of(label).unwrap_or_else(|| panic!("no label {label}"));
        comps[i] = comps[i].clone() + parse_scalar(coeff, &chart).unwrap();
    }
    FrameVector::new(comps)
}

pub fn index(s: &ParacontactStructure, label: &str) -> usize {
    s.frame().index_of(label).unwrap_or_else(|| panic!("no label {label}"))
}

/// `(L_ξ g)(e_i, e_j) = ξ(g_ij) − g([ξ,e_i], e_j) − g(e_i, [ξ,e_j])`; the
/// metric components are constant so the first term vanishes.
pub fn lie_xi_metric(s: &ParacontactStructure) -> Mat<Scalar> {
    let dim = s.dim();
    let g = s.metric().matrix();
    let pair = |v: &FrameVector, j: usize| -> Scalar {
        (0..dim).fold(Scalar::zero(), |acc, k| acc + v.component(k).scale(g.get(k, j)))
    };
    Mat::from_fn(dim, dim, |i, j| {
        let bi = s.frame().lie_bracket(0, i);
        let bj = s.frame().lie_bracket(0, j);
        -(pair(&bi, j) + pair(&bj, i))
    })
}

pub fn random_rational<R: Rng>(rng: &mut R, span: i64, den: i64) -> BigRational {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

pub fn random_nonzero<R: Rng>(rng: &mut R, span: i64, den: i64) -> BigRational {
    loop {
        let c = random_rational(rng, span, den);
        if c != q(0, 1) {
            return c;
        }
    }
}

pub fn alg(q: &BigRational) -> AlgNum {
    AlgNum::from_rational(q.clone())
}
