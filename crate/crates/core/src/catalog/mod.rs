//! Built-in example families and the text format for user structures.

mod builtin;
mod dsl;

use thiserror::Error;

use crate::frame::FrameError;
use crate::structure::StructureError;

pub use builtin::{builtins, find_builtin, instantiate_builtin, standard_labels, CatalogEntry, ExpectedResults, ParamSpec, RankLaw};
pub use dsl::{load_document, parse_document, print_document, FrameDecl, StructureDocument};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown builtin '{0}' (try `list`)")]
    UnknownBuiltin(String),
    #[error("builtin '{entry}' has no parameter '{param}'")]
    UnknownParameter { entry: String, param: String },
    #[error("builtin '{entry}': {param} = {value} violates {range}")]
    ParameterOutOfRange { entry: String, param: String, value: i64, range: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("Jacobi identity fails on ({}, {}, {}): jacobiator = {jacobiator}", .triple.0, .triple.1, .triple.2)]
    Jacobi { triple: (String, String, String), jacobiator: String },
    #[error("phi must have constant components, got {value} at {location}")]
    VariablePhi { location: String, value: String },
    #[error("not an almost paracontact metric structure: {check} fails, {location} = {value}")]
    NotAlmostParacontact { check: String, location: String, value: String },
}

impl CatalogError {
    /// Whether the error is a mathematical rejection rather than malformed
    /// input.
    pub fn is_semantic(&self) -> bool {
        matches!(
            self,
            CatalogError::Jacobi { .. }
                | CatalogError::NotAlmostParacontact { .. }
                | CatalogError::Structure(StructureError::EtaMismatch { .. })
                | CatalogError::Frame(FrameError::DegenerateMetric)
        )
    }
}
