//! Sample rank h over a grid for a structure whose h is not constant.

use paracontact::canonical::h_rank_profile;
use paracontact::catalog::instantiate_builtin;
use paracontact::scalar::int_point;

fn main() {
    let s = instantiate_builtin("ex-mu0-nonconstant", &Default::default()).unwrap();
    let points: Vec<_> = (-2..=2).map(|x| int_point(&[("x", x), ("y", 0), ("z", 0)])).collect();
    for (p, rank) in h_rank_profile(&s, &points).unwrap() {
        println!("x = {:>2}  rank h = {rank}", p["x"]);
    }
}
