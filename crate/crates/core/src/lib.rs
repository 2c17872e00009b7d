//! Numerical Dunkl harmonic analysis on radial and rank-one data.

pub mod besov;
pub mod error;
pub mod harness;
pub mod inequalities;
pub mod io;
pub mod measure;
pub mod multipliers;
mod serde_inf;
pub mod smoothness;
pub mod specfun;
pub mod transform;

pub use error::{DunklError, Result};
