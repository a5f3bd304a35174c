//! Numerical and symbolic tools for pairs of operators obeying weak forms of
//! the canonical commutation relation `[S, T] = 1`.

pub mod error;
pub mod extended;
pub mod fock_rep;
pub mod ladder;
pub mod linalg;
pub mod ncpoly;
pub mod scalar;
pub mod uncertainty;
pub mod weighted_l2;

pub use error::{Error, Result};
pub use scalar::GaussRational;
