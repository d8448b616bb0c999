use std::collections::BTreeMap;

use num_rational::BigRational;
use paracontact::scalar::{parse_scalar, AlgNum, Monomial, Scalar};
use proptest::prelude::*;

const CHART: [&str; 3] = ["x", "y", "z"];

fn leaf() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::constant(AlgNum::from_ratio(n, d))),
        (-3i64..=3, 1i64..=2).prop_map(|(n, d)| Scalar::constant(&AlgNum::from_ratio(n, d) * &AlgNum::sqrt2())),
        prop::sample::select(CHART.to_vec()).prop_map(Scalar::variable),
        (prop::sample::select(CHART.to_vec()), -3i64..=3, 1i64..=2)
            .prop_map(|(c, n, d)| Scalar::from_monomial(Monomial::exp(c, BigRational::new(n.into(), d.into())))),
    ]
}

fn scalar() -> impl Strategy<Value = Scalar> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner).prop_map(|(a, b)| a * b),
        ]
    })
}

fn point() -> impl Strategy<Value = BTreeMap<String, f64>> {
    (-2.0f64..2.0, -2.0f64..2.0, -1.0f64..1.0)
        .prop_map(|(x, y, z)| [("x", x), ("y", y), ("z", z)].into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c);
        prop_assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn display_parses_back(a in scalar()) {
        let text = a.to_string();
        let back = parse_scalar(&text, &CHART).unwrap();
        prop_assert_eq!(back, a, "text: {}", text);
    }

    #[test]
    fn derivative_rules(a in scalar(), b in scalar(), c in prop::sample::select(CHART.to_vec())) {
        let d = |s: &Scalar| s.partial_derivative(c);
        prop_assert_eq!(d(&(a.clone() * b.clone())), d(&a) * b.clone() + a.clone() * d(&b));
        prop_assert_eq!(d(&(a.clone() + b.clone())), d(&a) + d(&b));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in scalar(), b in scalar(), p in point()) {
        let (va, vb) = (a.evaluate_f64(&p), b.evaluate_f64(&p));
        prop_assert!(close((a.clone() * b.clone()).evaluate_f64(&p), va * vb));
        prop_assert!(close((a + b).evaluate_f64(&p), va + vb));
    }

    #[test]
    fn derivative_matches_finite_difference(a in scalar(), p in point()) {
        let h = 1e-6;
        let mut q = p.clone();
        *q.get_mut("x").unwrap() += h;
        let mut r = p.clone();
        *r.get_mut("x").unwrap() -= h;
        let fd = (a.evaluate_f64(&q) - a.evaluate_f64(&r)) / (2.0 * h);
        let exact = a.partial_derivative("x").evaluate_f64(&p);
        prop_assert!((fd - exact).abs() <= 1e-4 * (1.0 + exact.abs()), "{} vs {}", fd, exact);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_scalar("x + * y", &CHART).unwrap_err();
    assert!(e.to_string().contains("position"), "{e}");
    let e = parse_scalar("x + w", &CHART).unwrap_err();
    assert!(e.to_string().contains("'w'"), "{e}");
    assert!(parse_scalar("exp(sqrt2*x)", &CHART).is_err());
}

#[test]
fn canonical_forms_agree() {
    let a = parse_scalar("(x + 1)^2 - x*x - 2*x", &CHART).unwrap();
    assert_eq!(a, Scalar::one());
    let b = parse_scalar("exp(-2*z)*exp(2*z)*x", &CHART).unwrap();
    assert_eq!(b, Scalar::variable("x"));
    let c = parse_scalar("sqrt2*sqrt2", &CHART).unwrap();
    assert_eq!(c, Scalar::from_int(2));
}
