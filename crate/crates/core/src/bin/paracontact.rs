use std::io::Write;

fn main() {
    let outcome = paracontact::cli::run_from(std::env::args_os());
    // a closed pipe downstream is not an error worth a panic
    let _ = std::io::stdout().lock().write_all(outcome.stdout.as_bytes());
    let mut err = std::io::stderr().lock();
    let _ = err.write_all(outcome.stderr.as_bytes());
    if !outcome.stderr.is_empty() && !outcome.stderr.ends_with('\n') {
        let _ = err.write_all(b"\n");
    }
    std::process::exit(outcome.code);
}
