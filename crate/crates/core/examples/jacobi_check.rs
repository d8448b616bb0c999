//! A bracket table that violates the Jacobi identity is rejected at load
//! time with the offending triple.

use paracontact::catalog::{load_document, CatalogError};

const BAD: &str = "\
[name]
bad
[frame]
labels xi X Y Z W
bracket X Y = X
bracket X Z = Y
[metric]
g xi xi = 1
g X Y = 1
g Z W = 1
[phi]
phi X = X
phi Y = -Y
phi Z = Z
phi W = -W
[eta]
eta xi = 1
";

fn main() {
    match load_document(BAD) {
        Err(CatalogError::Jacobi { triple, jacobiator }) => {
            println!("Jacobi fails on ({}, {}, {}): jacobiator = {jacobiator}", triple.0, triple.1, triple.2);
        }
        Err(e) => println!("rejected for another reason: {e}"),
        Ok(_) => println!("accepted"),
    }
}
