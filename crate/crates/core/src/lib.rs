//! Numerical laboratory for analytic function spaces on the unit disk.
//!
//! Functions are carried as truncated Taylor series ([`TaylorSeries`]) whose
//! coefficients are produced by recurrences, never by sampling. On top of the
//! series engine sit quadrature on the disk ([`disk`]), coefficient-exact
//! operators ([`operators`]), norm estimators returning a convergence verdict
//! ([`norms`]) and the experiment layer ([`lab`]).

pub mod config;
pub mod disk;
mod dd;
pub mod error;
pub mod lab;
mod linalg;
pub mod norms;
pub mod operators;
pub mod report;
pub mod series;
pub mod suite;
pub mod verdict;

pub use config::RunConfig;
pub use error::{HvError, Result};
pub use norms::{NormEstimate, Status};
pub use series::{FunctionSpec, Scalar, TaylorSeries};

pub use num_complex::Complex64;
