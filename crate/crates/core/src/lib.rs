//! Exact-arithmetic engine for rational loop groups.
//!
//! Loops are square matrices of rational functions in one variable with
//! Gaussian-rational coefficients. The crate provides the linear algebra
//! over Q(i), the octonion algebra behind the exceptional group, closed-form
//! simple factors for the unitary, orthogonal, conformal-symplectic, and
//! exceptional families, factorization of a loop into simple factors
//! (untwisted and twisted), dressing and permutability transformations, and
//! the affine algebra used by the associated surface system. Every identity
//! is checked exactly; there are no tolerances anywhere.

pub mod affine;
pub mod dressing;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod loops;
pub mod octonion;
pub mod factorize;
pub mod sampling;
pub mod simple;

pub use error::{Error, Result};
