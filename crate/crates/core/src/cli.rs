//! Command-line front end. [`run_from`] does all the work and returns the
//! exit code with the captured output, so it can be tested in-process.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails
//! (including semantic rejections at ingestion), 2 on usage or parse errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use crate::canonical::point_from_values;
use crate::catalog::{builtins, find_builtin, load_document, CatalogEntry, CatalogError};
use crate::deformation::{deform, verify_deformation_consistency};
use crate::nullity::{solve_kappa_mu, NullityStatus};
use crate::pipeline::{canonical_sample, run_catalog_report, run_full_report, CanonicalSample, FullReport, Point, ReportOptions};
use crate::structure::{classify_structure, verify_structure, ParacontactStructure, VerificationReport};

#[derive(Parser, Debug)]
#[command(name = "paracontact", about = "Verify, classify and deform paracontact metric structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// Pretty-printed JSON with stable field names.
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the builtin examples and their parameters.
    List,
    /// Check the paracontact metric axioms.
    Verify(InputArgs),
    /// Solve for (kappa, mu) and report the classification predicates.
    Classify(InputArgs),
    /// Build canonical bases at the given points.
    Canonical {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Apply the D_c-homothetic deformation.
    Deform {
        #[command(flatten)]
        input: InputArgs,
        /// Nonzero rational, e.g. 3 or -1/2.
        #[arg(long = "c", allow_hyphen_values = true)]
        c: String,
        /// Re-verify the result and compare (kappa', mu') with the deformation law.
        #[arg(long)]
        verify: bool,
    },
    /// Run the full pipeline.
    Report {
        #[command(flatten)]
        input: OptionalInputArgs,
        #[command(flatten)]
        points: PointArgs,
        /// Report on every builtin with default parameters.
        #[arg(long, conflicts_with_all = ["builtin", "file"])]
        all: bool,
    },
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Name of a builtin example (see `list`).
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    pub builtin: Option<String>,
    /// Structure document in the text format.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Builtin parameter `k=v`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
}

#[derive(Args, Debug)]
pub struct OptionalInputArgs {
    /// Name of a builtin example (see `list`).
    #[arg(long, conflicts_with = "file")]
    pub builtin: Option<String>,
    /// Structure document in the text format.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Builtin parameter `k=v`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    /// Coordinates in chart order, e.g. `1,0,-1/2`; repeatable.
    #[arg(long = "point", value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub points: Vec<String>,
}

/// Exit code with captured output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: message.into() }
    }

    fn verdict(passed: bool, stdout: String) -> Self {
        Outcome { code: if passed { 0 } else { 1 }, stdout, stderr: String::new() }
    }
}

enum Input {
    Builtin(CatalogEntry, BTreeMap<String, i64>),
    File(PathBuf),
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, i64>, String> {
    raw.iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| format!("--param expects k=v, got '{p}'"))?;
            let v = v.trim().parse::<i64>().map_err(|_| format!("--param {k}: '{v}' is not an integer"))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn parse_rational(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    let bad = || format!("'{text}' is not a rational number");
    match t.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == 0.into() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

fn select(builtin: &Option<String>, file: &Option<PathBuf>, params: &[String]) -> Result<Input, String> {
    let params = parse_params(params)?;
    match (builtin, file) {
        (Some(name), None) => {
            let entry = find_builtin(name).map_err(|e| e.to_string())?;
            let resolved = entry.resolve_params(&params).map_err(|e| e.to_string())?;
            Ok(Input::Builtin(entry, resolved))
        }
        (None, Some(path)) if params.is_empty() => Ok(Input::File(path.clone())),
        (None, Some(_)) => Err("--param only applies to --builtin".to_string()),
        _ => Err("exactly one of --builtin or --file is required".to_string()),
    }
}

/// Loads the structure; `Err` carries the finished outcome.
fn load(input: &Input) -> Result<ParacontactStructure, Outcome> {
    match input {
        Input::Builtin(entry, params) => entry.instantiate(params).map_err(|e| Outcome::usage(e.to_string())),
        Input::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Outcome::usage(format!("cannot read {}: {e}", path.display())))?;
            load_document(&text).map_err(|e| rejection(&e, path))
        }
    }
}

fn rejection(e: &CatalogError, path: &std::path::Path) -> Outcome {
    let message = format!("{}: {e}", path.display());
    if e.is_semantic() {
        Outcome { code: 1, stdout: String::new(), stderr: format!("rejected {message}") }
    } else {
        Outcome::usage(message)
    }
}

fn parse_points(s: &ParacontactStructure, raw: &[String]) -> Result<Vec<Point>, String> {
    let coords: Vec<String> = s.frame().chart().map(|c| c.coords().to_vec()).unwrap_or_default();
    raw.iter()
        .map(|p| {
            let values = if p.trim().is_empty() {
                Vec::new()
            } else {
                p.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?
            };
            point_from_values(&coords, &values)
                .map_err(|e| format!("--point {p}: {e} (chart coordinates: [{}])", coords.join(", ")))
        })
        .collect()
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Text => text(),
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable");
            s.push('\n');
            s
        }
    }
}

#[derive(Serialize)]
struct ListItem<'a> {
    name: &'a str,
    title: &'a str,
    summary: &'a str,
    params: &'a [crate::catalog::ParamSpec],
}

fn list(format: Format) -> Outcome {
    let entries = builtins();
    let items: Vec<ListItem> =
        entries.iter().map(|e| ListItem { name: e.name, title: e.title, summary: e.summary, params: &e.params }).collect();
    let out = emit(format, &items, || {
        let mut out = String::new();
        for e in &entries {
            let _ = writeln!(out, "{}  {}", e.name, e.title);
            let _ = writeln!(out, "    {}", e.summary);
            for p in &e.params {
                let bound = p.max_param.map_or(String::new(), |m| format!(", <= {m}"));
                let _ = writeln!(out, "    --param {}=<int>  (>= {}{bound}, default {})  {}", p.name, p.min, p.default, p.description);
            }
        }
        out
    });
    Outcome::verdict(true, out)
}

#[derive(Serialize)]
struct Classification<'a> {
    structure: &'a VerificationReport,
    nullity: &'a crate::nullity::NullityResult,
}

fn classify(s: &ParacontactStructure, format: Format) -> Outcome {
    let report = match classify_structure(s) {
        Ok(r) => r,
        Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: e.to_string() },
    };
    let nullity = solve_kappa_mu(s);
    let ok = report.passed() && matches!(nullity.status, NullityStatus::Unique | NullityStatus::MuIndeterminate);
    let out = emit(format, &Classification { structure: &report, nullity: &nullity }, || {
        let mut out = report.to_string();
        let _ = writeln!(out, "{nullity}");
        for w in &nullity.residuals {
            let _ = writeln!(out, "  residual at {}: {}", w.location, w.value);
        }
        out
    });
    Outcome::verdict(ok, out)
}

fn canonical(s: &ParacontactStructure, points: &[Point], format: Format) -> Outcome {
    if points.is_empty() {
        return Outcome::usage("canonical needs at least one --point");
    }
    let samples: Vec<CanonicalSample> = points.iter().map(|p| canonical_sample(s, p)).collect();
    let ok = samples.iter().all(CanonicalSample::passed);
    let out = emit(format, &samples, || {
        let mut out = String::new();
        for c in &samples {
            let coords: Vec<String> = c.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "at ({}):", coords.join(", "));
            if let Some(b) = &c.basis {
                out.push_str(&b.to_string());
            }
            if let Some(nf) = &c.normal_form {
                out.push_str(&nf.to_string());
            }
            if let Some(e) = &c.error {
                let _ = writeln!(out, "  error: {e}");
            }
        }
        out
    });
    Outcome::verdict(ok, out)
}

#[derive(Serialize)]
struct DeformOutput {
    c: String,
    document: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<VerificationReport>,
}

fn deform_cmd(s: &ParacontactStructure, c: &str, check: bool, format: Format) -> Outcome {
    let c = match parse_rational(c) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(e),
    };
    let deformed = match deform(s, &c) {
        Ok(d) => d,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let verification = check.then(|| verify_deformation_consistency(s, &c));
    let ok = verification.as_ref().is_none_or(VerificationReport::passed);
    let document = crate::catalog::print_document(&deformed);
    let value = DeformOutput { c: crate::nullity::rational_string(&c), document: document.clone(), verification: verification.clone() };
    let out = emit(format, &value, || {
        let mut out = document;
        if let Some(v) = &verification {
            out.push('\n');
            out.push_str(&v.to_string());
        }
        out
    });
    Outcome::verdict(ok, out)
}

fn report_all(points: &[String], format: Format) -> Outcome {
    if !points.is_empty() {
        return Outcome::usage("--point cannot be combined with --all");
    }
    let entries = builtins();
    let results: Vec<Result<FullReport, CatalogError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| scope.spawn(move || run_catalog_report(e, &BTreeMap::new(), &ReportOptions::default())))
            .collect();
        handles.into_iter().map(|h| h.join().expect("report thread panicked")).collect()
    });
    let mut reports = Vec::new();
    for r in results {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: e.to_string() },
        }
    }
    let ok = reports.iter().all(FullReport::passed);
    let out = emit(format, &reports, || reports.iter().map(|r| format!("{r}\n")).collect());
    Outcome::verdict(ok, out)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome::usage(text),
            };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    let with_input = |builtin: &Option<String>, file: &Option<PathBuf>, params: &[String]| -> Result<(Input, ParacontactStructure), Outcome> {
        let input = select(builtin, file, params).map_err(Outcome::usage)?;
        let s = load(&input)?;
        Ok((input, s))
    };
    let result = match cli.command {
        Command::List => return list(format),
        Command::Verify(a) => with_input(&a.builtin, &a.file, &a.params).map(|(_, s)| {
            let r = verify_structure(&s);
            Outcome::verdict(r.passed(), emit(format, &r, || r.to_string()))
        }),
        Command::Classify(a) => with_input(&a.builtin, &a.file, &a.params).map(|(_, s)| classify(&s, format)),
        Command::Canonical { input, points } => with_input(&input.builtin, &input.file, &input.params).map(|(_, s)| {
            match parse_points(&s, &points.points) {
                Ok(p) => canonical(&s, &p, format),
                Err(e) => Outcome::usage(e),
            }
        }),
        Command::Deform { input, c, verify } => {
            with_input(&input.builtin, &input.file, &input.params).map(|(_, s)| deform_cmd(&s, &c, verify, format))
        }
        Command::Report { input, points, all } => {
            if all {
                return report_all(&points.points, format);
            }
            with_input(&input.builtin, &input.file, &input.params).map(|(selected, s)| {
                let parsed = match parse_points(&s, &points.points) {
                    Ok(p) => p,
                    Err(e) => return Outcome::usage(e),
                };
                let options = ReportOptions { canonical: !parsed.is_empty(), points: parsed };
                let report = match &selected {
                    Input::Builtin(entry, params) => match run_catalog_report(entry, params, &options) {
                        Ok(r) => r,
                        Err(e) => return Outcome::usage(e.to_string()),
                    },
                    Input::File(_) => run_full_report(&s, &options),
                };
                Outcome::verdict(report.passed(), emit(format, &report, || report.to_string()))
            })
        }
    };
    result.unwrap_or_else(|o| o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        run_from(std::iter::once("paracontact").chain(args.iter().copied()))
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-1/2").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["verify"]).code, 2);
        assert_eq!(run(&["verify", "--builtin", "nope"]).code, 2);
        assert_eq!(run(&["verify", "--builtin", "ex-mu2-hm-n", "--param", "m"]).code, 2);
        assert_eq!(run(&["deform", "--builtin", "ex-mu0-h1", "--c", "0"]).code, 2);
        assert_eq!(run(&["canonical", "--builtin", "ex-mu2-nonconstant", "--point", "1,0"]).code, 2);
        assert_eq!(run(&["--help"]).code, 0);
    }

    #[test]
    fn classify_and_canonical() {
        let o = run(&["classify", "--builtin", "ex-mu2-hm-n", "--param", "n=2", "--param", "m=2"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("(kappa, mu) = (-1, 2)"));
        let o = run(&["canonical", "--builtin", "ex-mu2-nonconstant", "--point", "1,0,0", "--point", "-1,0,0"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("eps1 = +1"));
        assert!(o.stdout.contains("eps1 = -1"));
    }
}
