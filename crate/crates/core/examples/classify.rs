//! Solve for (kappa, mu) on every catalog entry and print the case.

use paracontact::catalog::builtins;
use paracontact::nullity::{generic_h_rank, solve_kappa_mu};

fn main() {
    for entry in builtins() {
        let s = entry.instantiate(&Default::default()).expect("default parameters are valid");
        let result = solve_kappa_mu(&s);
        let rank = generic_h_rank(&s).map_or("varies".to_string(), |r| r.to_string());
        println!("{:<28} {result}  rank h = {rank}", s.name());
    }
}
