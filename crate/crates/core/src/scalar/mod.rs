//! Exact scalar functions on a coordinate chart.
//!
//! A [`Scalar`] is a finite sum `Σ c · Π x^k · exp(Σ q·x)` with coefficients
//! in ℚ(√2) ([`AlgNum`]) and rational exponential rates. Distinct exponent
//! data give linearly independent functions, so the canonical form is a
//! genuine normal form: two scalars are equal as functions iff their term
//! maps are equal.

mod algnum;
mod expr;
mod parse;

use thiserror::Error;

pub use algnum::AlgNum;
pub use expr::{int_point, Exponents, Monomial, Scalar, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown coordinate '{name}' at position {position}")]
    UnknownCoordinate { name: String, position: usize },
    #[error("exponential rate at position {position} is not rational")]
    NonRationalRate { position: usize },
    #[error("coordinate '{0}' does not belong to the chart")]
    ChartMismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// An ordered list of coordinate names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chart {
    coords: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(coords: impl IntoIterator<Item = S>) -> Self {
        Chart { coords: coords.into_iter().map(Into::into).collect() }
    }

    pub fn empty() -> Self {
        Chart::default()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.coords.iter().any(|c| c == name)
    }

    /// Parses `text` against this chart and returns its canonical form.
    pub fn parse(&self, text: &str) -> Result<Scalar, ScalarError> {
        parse::Parser::new(text, &self.coords)?.parse_all()
    }

    /// Fails when `s` mentions a coordinate outside this chart.
    pub fn check(&self, s: &Scalar) -> Result<(), ScalarError> {
        match s.variables().into_iter().find(|v| !self.contains(v)) {
            Some(v) => Err(ScalarError::ChartMismatch(v)),
            None => Ok(()),
        }
    }

    /// Chart-checked ring operation. `rhs` is ignored for [`ArithOp::Neg`].
    pub fn arith(&self, op: ArithOp, lhs: &Scalar, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(lhs)?;
        self.check(rhs)?;
        Ok(match op {
            ArithOp::Add => lhs + rhs,
            ArithOp::Sub => lhs - rhs,
            ArithOp::Mul => lhs * rhs,
            ArithOp::Neg => -lhs,
        })
    }

    pub fn partial_derivative(&self, s: &Scalar, coord: &str) -> Result<Scalar, ScalarError> {
        if !self.contains(coord) {
            return Err(ScalarError::ChartMismatch(coord.to_string()));
        }
        self.check(s)?;
        Ok(s.partial_derivative(coord))
    }
}

/// Parses names from `chart` only; see [`Chart::parse`].
pub fn parse_scalar(text: &str, chart: &[&str]) -> Result<Scalar, ScalarError> {
    Chart::new(chart.iter().copied()).parse(text)
}

/// Parses with an arbitrary set of admissible names (used by the document
/// format, where frame labels behave like linear symbols).
pub(crate) fn parse_with_names(text: &str, names: &[String]) -> Result<Scalar, ScalarError> {
    parse::Parser::new(text, names)?.parse_all()
}
