//! Lower and upper bounds for the first nontrivial Neumann eigenvalue of
//! the Laplacian (and the p-Laplacian) on domains obtained as images of
//! simpler domains under quasiconformal maps, with numerical oracles.

pub mod cli;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod mappings;
pub mod oracle;
pub mod transfer;

pub use error::{Error, ErrorClass, Result};
pub use geometry::DomainSpec;
pub use mappings::MappingSpec;
