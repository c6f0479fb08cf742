//! Exact rational scalars and polynomials in `x, y, a, b` with the weighted
//! grading used throughout the crate.

mod parse;
mod poly;
pub mod rational;

pub use parse::parse_poly;
pub use poly::{Grading, Monomial, Poly, Var};
pub use rational::Rational;
