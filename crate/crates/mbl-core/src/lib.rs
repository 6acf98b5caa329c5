//! Numerical laboratory for many-body localization in disordered XY and XXZ chains.

pub mod disorder;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod oracle;
pub mod validation;
pub mod xxz;
pub mod xy;

pub use error::{Error, Result};
