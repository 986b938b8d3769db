//! Bound calculator and exhaustive lemma verifiers for Ramsey upper
//! densities of infinite F-factors.

pub mod bounds;
pub mod coloring;
pub mod error;
pub mod extended;
pub mod graph;
pub mod packing;
pub mod report;
pub mod variational;
pub mod verifiers;

pub use error::{Error, Result};
