//! Counting experiments on mapping class groups of punctured surfaces.
//!
//! Two engines live here. [`exact_torus`] models the mapping class group of
//! the once-punctured torus as `SL(2, Z)` with arbitrary-precision entries,
//! where classification, intersection numbers and curve-complex distances
//! are exact. [`lamination`] handles general punctured surfaces through
//! ideal triangulations, normal coordinates and flip sequences.
//! [`experiments`] turns both into density and growth measurements and
//! [`cli`] drives everything from the command line.

pub mod cli;
pub mod error;
pub mod exact_torus;
pub mod experiments;
pub mod lamination;

pub use error::{Error, Result};

/// Library version stamped into caches and reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
