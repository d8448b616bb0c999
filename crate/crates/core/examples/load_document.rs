//! Parse a structure from the text format, verify it, and print it back.
//!
//! cargo run --example load_document -- path/to/structure.pc

use paracontact::catalog::{load_document, print_document};
use paracontact::nullity::solve_kappa_mu;
use paracontact::structure::verify_structure;

const HEISENBERG: &str = "\
[name]
heisenberg
[frame]
labels xi X Y
bracket X Y = 2*xi
[metric]
g xi xi = 1
g X Y = 1
[phi]
phi X = X
phi Y = -Y
[eta]
eta xi = 1
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable file"),
        None => HEISENBERG.to_string(),
    };
    let s = match load_document(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("rejected: {e}");
            std::process::exit(if e.is_semantic() { 1 } else { 2 });
        }
    };
    println!("{}", verify_structure(&s));
    println!("{}", solve_kappa_mu(&s));
    print!("{}", print_document(&s));
}
