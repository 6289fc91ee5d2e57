//! Exact summation of multiple factorial series via divided differences.
//!
//! Series of the shape
//!
//! ```text
//! sum_{n1>=1} ... sum_{nk>=1}  n1*...*nj / (n1+...+nk)!
//! ```
//!
//! have closed forms that are rational linear combinations of powers of e.
//! This crate computes those closed forms exactly (arbitrary-precision
//! rationals over the basis `e^x`), and cross-checks every one of them
//! against an independent brute-force truncated-summation oracle.

pub mod divdiff;
pub mod error;
pub mod exact;
pub mod exppoly;
pub mod numeric;
pub mod numeval;
pub mod oracle;
pub mod quadrature;
pub mod series;

pub use divdiff::NodeSet;
pub use error::Error;
pub use exact::{binomial, factorial, make_rational, ExpLinear, Rational};
pub use exppoly::{ExpPoly, Poly};
pub use numeric::Fixed;
pub use numeval::DecimalValue;
pub use series::SeriesCoeffs;

pub type Result<T> = std::result::Result<T, Error>;
