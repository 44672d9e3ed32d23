//! Casimir free energies, pressures and entropies from the Lifshitz formula,
//! proximity-force estimates for curved bodies, and Yukawa-type constraints
//! on a fifth force.

// `!(x > 0.0)` is the NaN-rejecting guard used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lifshitz;
pub mod models;
pub mod optics;
pub mod presets;
pub mod quadrature;
pub mod thermo;
pub mod yukawa;

pub use error::{CasimirError, Result};
