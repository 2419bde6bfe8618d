//! Eisenstein series and hauptmoduls for genus-zero groups, zero location in
//! fundamental domains, and the associated divisor polynomials.

pub mod divisor_poly;
pub mod error;
pub mod exact;
pub mod group_registry;
pub mod modular_forms;
pub mod numeric;
pub mod series_core;
pub mod zero_locator;

pub use error::{Error, Result};
