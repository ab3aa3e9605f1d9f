//! Exact enumeration of `Hom(F_r, SL₂(F_q))` for odd q: stratification,
//! brute-force orbit counting, and the closed-form counting polynomials it is
//! checked against.

pub mod cli;
pub mod error;
pub mod formulas;
pub mod gf;
pub mod json;
pub mod mat;
pub mod orbits;
pub mod poly;
pub mod strata;
pub mod verify;

pub use error::{Error, Result};
