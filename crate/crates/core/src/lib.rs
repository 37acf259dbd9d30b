//! Exact time-frequency uncertainty products for compactly supported
//! piecewise polynomials.

pub mod bspline;
pub mod dictionaries;
pub mod error;
pub mod generate;
pub mod moments;
pub mod pwpoly;
pub mod ratpoly;
pub mod spectrum;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use pwpoly::{ClassTag, FunctionClass, PiecewisePoly};
pub use ratpoly::{Polynomial, Rational};
