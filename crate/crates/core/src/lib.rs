//! Exact construction and verification of polynomial solutions of the
//! nonlinear integral equation
//!
//! ```text
//! integral_a^b P(y) P(alpha(y) + x beta(y)) w(y) dy = P(x)
//! ```
//!
//! for polynomial `alpha`, `beta` and a normalized weight `w` given by its
//! moments. All arithmetic is over arbitrary-precision rationals except the
//! multi-start Newton solver in [`branch`].

pub mod basis;
pub mod branch;
pub mod cli;
pub mod constructor;
pub mod error;
pub mod matrix;
pub mod moments;
pub mod poly;
pub mod sturm;
pub mod surd;
pub mod verifier;

pub use error::{Error, Result};
pub use matrix::RationalMatrix;
pub use moments::{MomentFunctional, MomentSequence, WeightSpec};
pub use poly::{Poly, Rational};
pub use surd::{SurdPoly, SurdScalar};
