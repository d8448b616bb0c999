//! The full verification pipeline on one structure, as a single report.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::canonical::{canonical_basis, evaluate_at_point, verify_normal_form, CanonicalView};
use crate::catalog::{CatalogEntry, RankLaw};
use crate::nullity::{check_h_squared, generic_h_rank, rational_string, solve_kappa_mu, NullityResult, NullityStatus};
use crate::scalar::Scalar;
use crate::structure::{classify_structure, CheckResult, ParacontactStructure, VerificationReport};

/// Name of the curvature property recorded by the classification.
pub const CURVATURE_IDENTITY: &str = "R(X, Y) xi = -(eta(Y) X - eta(X) Y)";

pub use crate::canonical::Point;

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    /// Points for the rank profile and canonical bases. When empty and h is
    /// not constant, a default grid is sampled for the rank profile.
    pub points: Vec<Point>,
    /// Whether to build canonical bases at `points`.
    pub canonical: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankSample {
    pub point: BTreeMap<String, String>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalSample {
    pub point: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<CanonicalView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CanonicalSample {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.normal_form.as_ref().is_some_and(VerificationReport::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FullReport {
    pub name: String,
    pub dim: usize,
    pub structure: VerificationReport,
    pub nullity: NullityResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_squared: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic_rank: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rank_profile: Vec<RankSample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub canonical: Vec<CanonicalSample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<VerificationReport>,
}

impl FullReport {
    /// True iff every axiom, the `h²` law, each canonical basis and the
    /// expected-results comparison pass. A failed nullity solve alone does
    /// not fail the report.
    pub fn passed(&self) -> bool {
        self.structure.passed()
            && self.h_squared.as_ref().is_none_or(VerificationReport::passed)
            && self.canonical.iter().all(CanonicalSample::passed)
            && self.expected.as_ref().is_none_or(VerificationReport::passed)
    }

    /// Whether the structure is a paracontact metric `(κ, μ)`-space.
    pub fn is_nullity_space(&self) -> bool {
        self.structure.passed() && matches!(self.nullity.status, NullityStatus::Unique | NullityStatus::MuIndeterminate)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn render_point(p: &Point) -> BTreeMap<String, String> {
    p.iter().map(|(k, v)| (k.clone(), rational_string(v))).collect()
}

fn point_label(p: &BTreeMap<String, String>) -> String {
    if p.is_empty() {
        return "(any point)".to_string();
    }
    let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("({})", parts.join(", "))
}

/// Every combination of `{-1, 0, 2}` over the chart coordinates.
pub fn default_sample_points(coords: &[String]) -> Vec<Point> {
    let values = [-1i64, 0, 2];
    let mut out: Vec<Point> = vec![BTreeMap::new()];
    for c in coords {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.insert(c.clone(), BigRational::from_integer((*v).into()));
                    q
                })
            })
            .collect();
    }
    out
}

/// Canonical basis at one point with its normal-form check.
pub fn canonical_sample(s: &ParacontactStructure, p: &Point) -> CanonicalSample {
    let point = render_point(p);
    match evaluate_at_point(s, p).and_then(|pe| canonical_basis(&pe).map(|b| (pe, b))) {
        Ok((pe, b)) => CanonicalSample {
            point,
            normal_form: Some(verify_normal_form(&b, &pe)),
            basis: Some(b.to_view(s.frame().labels())),
            error: None,
        },
        Err(e) => CanonicalSample { point, basis: None, normal_form: None, error: Some(e.to_string()) },
    }
}

pub fn run_full_report(s: &ParacontactStructure, options: &ReportOptions) -> FullReport {
    let structure = classify_structure(s).unwrap_or_else(|e| {
        let mut r = VerificationReport::new(format!("classification: {}", s.name()));
        r.push(CheckResult::fail("h = 0 agrees with xi Killing", e.to_string(), Scalar::one()));
        r
    });
    let nullity = solve_kappa_mu(s);
    let h_squared = nullity.kappa.as_ref().map(|k| check_h_squared(s, k));
    let generic_rank = generic_h_rank(s);

    let coords: Vec<String> = s.frame().chart().map(|c| c.coords().to_vec()).unwrap_or_default();
    let profile_points = if options.points.is_empty() && generic_rank.is_none() {
        default_sample_points(&coords)
    } else {
        options.points.clone()
    };
    let rank_profile = profile_points
        .iter()
        .filter_map(|p| evaluate_at_point(s, p).ok().map(|pe| RankSample { point: render_point(p), rank: pe.h_rank() }))
        .collect();

    let canonical =
        if options.canonical { options.points.iter().map(|p| canonical_sample(s, p)).collect() } else { Vec::new() };

    FullReport {
        name: s.name().to_string(),
        dim: s.dim(),
        structure,
        nullity,
        h_squared,
        generic_rank,
        rank_profile,
        canonical,
        expected: None,
    }
}

/// Compares a report against the recorded results of a catalog entry.
pub fn compare_with_expected(entry: &CatalogEntry, params: &BTreeMap<String, i64>, report: &FullReport) -> VerificationReport {
    let e = &entry.expected;
    let mut r = VerificationReport::new(format!("expected results for {}", entry.name));
    let q = |n: i64| BigRational::from_integer(n.into());
    r.push(match &report.nullity.kappa {
        Some(k) if *k == q(e.kappa) => CheckResult::pass(format!("kappa = {}", e.kappa)),
        other => CheckResult::fail(
            format!("kappa = {}", e.kappa),
            format!("kappa = {}", other.as_ref().map_or("none".into(), rational_string)),
            Scalar::one(),
        ),
    });
    r.push(match e.mu {
        Some(mu) => match report.nullity.pair() {
            Some((_, m)) if m == q(mu) => CheckResult::pass(format!("mu = {mu} (unique)")),
            _ => CheckResult::fail(format!("mu = {mu} (unique)"), report.nullity.to_string(), Scalar::one()),
        },
        None if report.nullity.status == NullityStatus::MuIndeterminate => CheckResult::pass("mu indeterminate (h = 0)"),
        None => CheckResult::fail("mu indeterminate (h = 0)", report.nullity.to_string(), Scalar::one()),
    });
    let rank_ok = match e.rank {
        RankLaw::Parameter(_) | RankLaw::Constant(_) => report.generic_rank == entry.expected_rank(params),
        RankLaw::VanishesOnXZero => {
            !report.rank_profile.is_empty()
                && report.rank_profile.iter().all(|sample| {
                    let on_slice = sample.point.get("x").is_some_and(|x| x == "0");
                    sample.rank == usize::from(!on_slice)
                })
        }
    };
    let rank_name = match e.rank {
        RankLaw::VanishesOnXZero => "rank h_p = 0 iff x = 0, else 1".to_string(),
        _ => format!("rank h = {}", entry.expected_rank(params).unwrap_or(0)),
    };
    r.push(if rank_ok { CheckResult::pass(rank_name) } else { CheckResult::fail(rank_name, "rank", Scalar::one()) });
    let ps = report.structure.flags.para_sasakian;
    let name = format!("paraSasakian = {}", e.para_sasakian);
    r.push(if ps == Some(e.para_sasakian) { CheckResult::pass(name) } else { CheckResult::fail(name, "paraSasakian", Scalar::one()) });
    let curv = report.structure.check(CURVATURE_IDENTITY).map(|c| c.passed);
    let name = format!("{CURVATURE_IDENTITY} is {}", e.sasakian_curvature);
    r.push(if curv == Some(e.sasakian_curvature) { CheckResult::pass(name) } else { CheckResult::fail(name, "curvature", Scalar::one()) });
    r
}

/// Instantiates a catalog entry and runs the pipeline with the expected
/// results attached.
pub fn run_catalog_report(
    entry: &CatalogEntry,
    params: &BTreeMap<String, i64>,
    options: &ReportOptions,
) -> Result<FullReport, crate::catalog::CatalogError> {
    let resolved = entry.resolve_params(params)?;
    let s = entry.instantiate(&resolved)?;
    let mut report = run_full_report(&s, options);
    report.expected = Some(compare_with_expected(entry, &resolved, &report));
    Ok(report)
}

impl fmt::Display for FullReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} (dim {}) ==", self.name, self.dim)?;
        write!(f, "{}", self.structure)?;
        writeln!(f, "nullity: {}", self.nullity)?;
        for w in &self.nullity.residuals {
            writeln!(f, "  residual at {}: {}", w.location, w.value)?;
        }
        if let Some(h2) = &self.h_squared {
            write!(f, "{h2}")?;
        }
        if let Some(r) = self.generic_rank {
            writeln!(f, "rank h = {r} at every point")?;
        }
        if !self.rank_profile.is_empty() {
            writeln!(f, "rank profile:")?;
            for s in &self.rank_profile {
                writeln!(f, "  {} -> {}", point_label(&s.point), s.rank)?;
            }
        }
        for c in &self.canonical {
            writeln!(f, "canonical basis at {}:", point_label(&c.point))?;
            if let Some(b) = &c.basis {
                write!(f, "{b}")?;
            }
            if let Some(nf) = &c.normal_form {
                write!(f, "{nf}")?;
            }
            if let Some(e) = &c.error {
                writeln!(f, "  error: {e}")?;
            }
        }
        if let Some(e) = &self.expected {
            write!(f, "{e}")?;
        }
        writeln!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
