//! Weil generators in CM fields and super-isolated abelian varieties over
//! finite fields.

pub mod arith;
pub mod catalog;
pub mod cm_field;
pub mod error;
pub mod eta_curve;
pub mod finite_geometry;
pub mod number_field;
pub mod weil_search;

pub use error::{Error, Result};
