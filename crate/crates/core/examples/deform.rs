//! Deform a structure by a constant c and confirm the (kappa, mu) law.
//!
//! cargo run --example deform -- 3/2

use num_rational::BigRational;
use paracontact::catalog::instantiate_builtin;
use paracontact::catalog::print_document;
use paracontact::deformation::{deform, deform_kappa_mu, verify_deformation_consistency};
use paracontact::nullity::solve_kappa_mu;

fn main() {
    let c: BigRational = std::env::args().nth(1).unwrap_or_else(|| "2".into()).parse().expect("rational c");
    let s = instantiate_builtin("ex-mu0-h1", &[("n".to_string(), 1)].into()).unwrap();
    let (k, m) = solve_kappa_mu(&s).pair().expect("source has unique (kappa, mu)");
    let (k2, m2) = match deform_kappa_mu(&k, &m, &c) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("source ({k}, {m}) -> predicted ({k2}, {m2})");

    let d = deform(&s, &c).unwrap();
    print!("{}", print_document(&d));
    let report = verify_deformation_consistency(&s, &c);
    println!("{report}");
}
