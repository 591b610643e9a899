//! Numerical toolkit for fractional differential equations in Banach
//! sequence spaces.
//!
//! * [`frac`]: fractional integrals and derivatives on uniform grids.
//! * [`volterra`]: Picard iteration for `u = u₀ + J^α f(·, u)` and the
//!   existence / uniqueness intervals with their contraction constants.
//! * [`mnc`]: measures of non-compactness on symbolic subsets of `c₀`.
//! * [`kamke`]: Kamke comparison functions `h(t)·s^λ` and their comparison
//!   problems.
//! * [`plap`]: the semi-discrete fractional p-Laplacian system and its
//!   existence certificate.
//! * [`expr`]: the expression grammar used for problem data.

pub mod error;
pub mod expr;
pub mod frac;
pub mod kamke;
pub mod mnc;
pub mod oracles;
pub mod plap;
pub mod selftest;
pub mod volterra;

pub use error::{FracError, Result};
