mod common;

use paracontact::canonical::{canonical_basis, evaluate_at_point, verify_normal_form, CanonicalError, PointEvaluation, PointMatrix};
use paracontact::linalg::Mat;
use paracontact::scalar::{int_point, AlgNum};

use common::*;

fn int_mat(rows: &[&[i64]]) -> Mat<AlgNum> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|x| AlgNum::from_int(*x)).collect()).collect())
}

/// Normal form with signs (+1, -1) and rank 2, expressed in the basis
/// `ξ, X1 + X2, Y1, X1 - X2, Y2`, where `g(f, hf) = 0` for every basis
/// vector.
fn hyperbolic_pair() -> PointEvaluation {
    let g0 = int_mat(&[&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 0, 0, -1], &[0, 0, 0, -1, 0]]);
    let h0 = int_mat(&[&[0, 0, 0, 0, 0], &[0, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 0, 0, 0], &[0, 0, 0, 1, 0]]);
    let phi0 = int_mat(&[&[0, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, -1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, -1]]);
    // columns: xi, X1 + X2, Y1, X1 - X2, Y2
    let p = int_mat(&[&[1, 0, 0, 0, 0], &[0, 1, 0, 1, 0], &[0, 0, 1, 0, 0], &[0, 1, 0, -1, 0], &[0, 0, 0, 0, 1]]);
    let pi = p.inverse().unwrap();
    let g = p.transpose().mul(&g0).mul(&p);
    let h = pi.mul(&h0).mul(&p);
    let phi = pi.mul(&phi0).mul(&p);
    let eta = vec![AlgNum::one(), AlgNum::zero(), AlgNum::zero(), AlgNum::zero(), AlgNum::zero()];
    PointEvaluation::from_parts(g, phi, eta, PointMatrix::Exact(h))
}

#[test]
fn summed_seed_when_every_candidate_is_isotropic_for_h() {
    let pe = hyperbolic_pair();
    let res = canonical_basis(&pe).unwrap();
    assert!(res.is_exact());
    assert_eq!(res.rank(), 2);
    let b = res.exact().unwrap();
    assert_eq!(b.summed_seeds, vec![1]);
    let mut signs = b.signs.clone();
    signs.sort();
    assert_eq!(signs, vec![-1, 1]);
    assert!(verify_normal_form(&res, &pe).passed());
}

#[test]
fn inexact_point_gives_numeric_basis() {
    let s = builtin("ex-mu0-nonconstant", &[]);
    let pe = evaluate_at_point(&s, &int_point(&[("x", 3), ("y", 1), ("z", 1)])).unwrap();
    assert!(!pe.exact);
    let res = canonical_basis(&pe).unwrap();
    assert!(!res.is_exact());
    assert_eq!(res.signs(), &[-1]);
    assert!(verify_normal_form(&res, &pe).passed());
    let mut tampered = res.clone();
    tampered.swap_pair(1);
    assert!(!verify_normal_form(&tampered, &pe).passed());
}

#[test]
fn sign_of_the_mu0_example_is_minus_sign_x() {
    // h e1 = -2x e^{-2z} e2, so g(e1, h e1) has the sign of -x
    let s = builtin("ex-mu0-nonconstant", &[]);
    for x in [-3, -1, 1, 4] {
        let pe = evaluate_at_point(&s, &int_point(&[("x", x), ("y", 0), ("z", 0)])).unwrap();
        let res = canonical_basis(&pe).unwrap();
        assert_eq!(res.signs(), &[-(x.signum() as i8)]);
        assert!(verify_normal_form(&res, &pe).passed());
    }
}

#[test]
fn rejects_h_squared_nonzero_and_degenerate_metric() {
    let g = int_mat(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
    let phi = int_mat(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    let eta = vec![AlgNum::one(), AlgNum::zero(), AlgNum::zero()];
    let h = int_mat(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    let pe = PointEvaluation::from_parts(g, phi.clone(), eta.clone(), PointMatrix::Exact(h));
    assert!(matches!(canonical_basis(&pe), Err(CanonicalError::HSquaredNonzero { .. })));

    let g = int_mat(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
    let pe = PointEvaluation::from_parts(g, phi, eta, PointMatrix::Exact(Mat::zeros(3, 3)));
    assert!(matches!(canonical_basis(&pe), Err(CanonicalError::DegenerateMetric)));
}

#[test]
fn constant_rank_families_in_every_dimension() {
    for n in 2..=4 {
        for m in 1..=n {
            let s = builtin("ex-mu2-hm-n", &[("n", n), ("m", m)]);
            let pe = evaluate_at_point(&s, &Default::default()).unwrap();
            let res = canonical_basis(&pe).unwrap();
            assert_eq!(res.rank(), m as usize);
            assert!(verify_normal_form(&res, &pe).passed(), "n={n} m={m}");
            if m >= 2 {
                let s = builtin("ex-mu0-h2+", &[("n", n), ("m", m)]);
                let pe = evaluate_at_point(&s, &Default::default()).unwrap();
                let res = canonical_basis(&pe).unwrap();
                assert_eq!(res.rank(), m as usize);
                assert!(verify_normal_form(&res, &pe).passed(), "n={n} m={m}");
            }
        }
    }
}
