use std::fmt;

use serde::Serialize;

use crate::scalar::Scalar;

/// A nonzero tensor component that falsifies a check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub location: String,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: true, witness: None }
    }

    pub fn fail(name: impl Into<String>, location: impl Into<String>, value: Scalar) -> Self {
        debug_assert!(!value.is_zero(), "witness must be nonzero");
        CheckResult { name: name.into(), passed: false, witness: Some(Witness { location: location.into(), value }) }
    }

    /// Passes iff every residual is zero; otherwise the first nonzero one
    /// becomes the witness.
    pub fn residuals(name: impl Into<String>, residuals: impl IntoIterator<Item = (String, Scalar)>) -> Self {
        let name = name.into();
        match residuals.into_iter().find(|(_, v)| !v.is_zero()) {
            Some((loc, v)) => CheckResult::fail(name, loc, v),
            None => CheckResult::pass(name),
        }
    }
}

/// Classification flags; `None` means the corresponding test was not run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ClassificationFlags {
    pub almost_paracontact_metric: Option<bool>,
    pub paracontact_metric: Option<bool>,
    pub k_paracontact: Option<bool>,
    pub normal: Option<bool>,
    pub para_sasakian: Option<bool>,
}

impl ClassificationFlags {
    pub fn merge(&mut self, other: &ClassificationFlags) {
        fn pick(a: &mut Option<bool>, b: Option<bool>) {
            if b.is_some() {
                *a = b;
            }
        }
        pick(&mut self.almost_paracontact_metric, other.almost_paracontact_metric);
        pick(&mut self.paracontact_metric, other.paracontact_metric);
        pick(&mut self.k_paracontact, other.k_paracontact);
        pick(&mut self.normal, other.normal);
        pick(&mut self.para_sasakian, other.para_sasakian);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub title: String,
    /// Axioms and identities; any failure makes the report fail.
    pub checks: Vec<CheckResult>,
    /// Classification predicates; a `false` here is information, not failure.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<CheckResult>,
    /// Dimensions of the ±1 eigendistributions of φ inside ker η.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen_dims: Option<(usize, usize)>,
    pub flags: ClassificationFlags,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        VerificationReport { title: title.into(), ..Default::default() }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn push_property(&mut self, property: CheckResult) {
        self.properties.push(property);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().chain(&self.properties).find(|c| c.name == name)
    }

    /// Appends the checks and flags of `other`.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.properties.extend(other.properties);
        if other.eigen_dims.is_some() {
            self.eigen_dims = other.eigen_dims;
        }
        self.flags.merge(&other.flags);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.title.is_empty() {
            writeln!(f, "{}", self.title)?;
        }
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "  [pass] {}", c.name)?,
                Some(w) => writeln!(f, "  [FAIL] {}: {} = {}", c.name, w.location, w.value)?,
            }
        }
        for c in &self.properties {
            match &c.witness {
                None => writeln!(f, "  [yes]  {}", c.name)?,
                Some(w) => writeln!(f, "  [no]   {}: {} = {}", c.name, w.location, w.value)?,
            }
        }
        if let Some((p, m)) = self.eigen_dims {
            writeln!(f, "  eigendistributions: dim D+ = {p}, dim D- = {m}")?;
        }
        Ok(())
    }
}
