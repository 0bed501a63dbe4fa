//! Functions of bounded variation in one dimension, the extended integral functional
//! with recession terms, liftings of BV functions, and strict / area-strict
//! convergence experiments.

pub mod bvfun;
pub mod convergence;
pub mod error;
pub mod exec;
pub mod functional;
pub mod generators;
pub mod integrand;
pub mod lifting;
pub mod quadrature;
pub mod vector;

pub use error::{Error, Result};
pub use exec::Execution;
pub use quadrature::QuadratureSpec;
