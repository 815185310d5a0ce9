//! Exact coefficient arithmetic: integers, Gaussian rationals, polynomials
//! and rational functions of the action variables.

pub mod factor;
pub mod gauss;
pub mod int;
pub mod poly;
pub mod ratfn;
pub mod roots;

pub use gauss::{GInt, GaussianRational};
pub use int::Int;
pub use poly::{Poly, MAX_VARS};
pub use ratfn::{ActionRational, RatFn};
