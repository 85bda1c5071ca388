//! Exact scalar arithmetic: rationals, polynomials in `h`, and truncated
//! power series in a nilpotent variable.

mod poly;
mod rational;
mod series;

pub use poly::HPoly;
pub use rational::{binomial, factorial, Rational};
pub use series::{series_elementary, Elementary, WSeries};
