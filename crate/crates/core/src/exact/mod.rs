//! Exact scalars, polynomials, and rational functions over the Gaussian
//! rationals.

pub mod poly;
pub mod ratfun;
pub mod roots;
pub mod scalar;

pub use poly::Poly;
pub use ratfun::{moebius_laurent, MoebiusChart, Rf};
pub use roots::gaussian_roots;
pub use scalar::Gq;
