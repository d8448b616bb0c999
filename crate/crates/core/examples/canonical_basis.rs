//! Build the canonical basis at a few points where the sign of h changes.

use paracontact::canonical::{canonical_basis, evaluate_at_point, verify_normal_form};
use paracontact::catalog::instantiate_builtin;
use paracontact::scalar::int_point;

fn main() {
    let s = instantiate_builtin("ex-mu2-nonconstant", &Default::default()).unwrap();
    let labels: Vec<String> = (0..s.dim()).map(|i| s.label(i).to_string()).collect();
    for x in [2, 0, -3] {
        let p = int_point(&[("x", x), ("y", 1), ("z", 0)]);
        let pe = evaluate_at_point(&s, &p).unwrap();
        println!("-- x = {x}, rank h = {}", pe.h_rank());
        match canonical_basis(&pe) {
            Ok(basis) => {
                println!("{}", basis.to_view(&labels));
                let check = verify_normal_form(&basis, &pe);
                println!("normal form: {}", if check.passed() { "ok" } else { "FAILED" });
            }
            Err(e) => println!("no basis: {e}"),
        }
    }
}
