pub mod scalar;
pub mod linalg;
pub mod frame;
pub mod structure;
pub mod catalog;
pub mod nullity;
pub mod canonical;
pub mod deformation;
pub mod pipeline;
pub mod cli;
