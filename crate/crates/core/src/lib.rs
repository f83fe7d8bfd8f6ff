//! Threshold energies, conjugate-operator coefficients and positivity scans
//! for the Molchanov-Vainberg Laplacian in dimensions 2 and 3.

pub mod cheb;
pub mod error;
pub mod gfun;
pub mod interp;
pub mod linalg;
pub mod scan;
pub mod solver;

pub use error::{Error, Result};
