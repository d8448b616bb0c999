//! Verify the axioms of a built-in structure and print the report.
//!
//! cargo run --example verify_builtin -- ex-mu0-h1 n=2

use std::collections::BTreeMap;

use paracontact::catalog::instantiate_builtin;
use paracontact::structure::verify_structure;

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "ex-mu2-nonconstant".to_string());
    let params: BTreeMap<String, i64> = args
        .filter_map(|a| {
            let (k, v) = a.split_once('=')?;
            Some((k.to_string(), v.parse().ok()?))
        })
        .collect();
    let s = match instantiate_builtin(&name, &params) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let report = verify_structure(&s);
    println!("{report}");
    std::process::exit(if report.passed() { 0 } else { 1 });
}
