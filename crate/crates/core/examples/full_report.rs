//! Run the full pipeline on every catalog entry, in text and JSON.

use paracontact::catalog::builtins;
use paracontact::pipeline::{run_full_report, ReportOptions};

fn main() {
    let json = std::env::args().any(|a| a == "--json");
    for entry in builtins() {
        let s = entry.instantiate(&Default::default()).unwrap();
        let report = run_full_report(&s, &ReportOptions::default());
        if json {
            println!("{}", report.to_json());
        } else {
            println!("{report}\n");
        }
    }
}
