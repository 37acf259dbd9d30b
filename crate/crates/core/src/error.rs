use thiserror::Error;

use crate::ratpoly::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integration bounds reversed: {a} > {b}")]
    ReversedInterval { a: Box<Rational>, b: Box<Rational> },

    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },

    #[error("invalid piecewise polynomial: {0}")]
    InvalidPiecewise(String),

    #[error("scale factor gamma must be nonzero")]
    ZeroScale,

    #[error("function is identically zero")]
    ZeroFunction,

    #[error("function jumps at interior breakpoint {at}")]
    InteriorJump { at: Rational },

    #[error("support [{lo}, {hi}] is not symmetric about the origin")]
    AsymmetricSupport {
        lo: Box<Rational>,
        hi: Box<Rational>,
    },

    #[error("0 * inf is undefined")]
    ZeroTimesInfinity,

    #[error("frequency moment k={k} diverges: {reason}")]
    Divergent { k: u32, reason: String },

    #[error("quadrature did not reach rel_tol {rel_tol:e} within {panels} panels (estimate {estimate:e})")]
    NoConvergence {
        rel_tol: f64,
        panels: usize,
        estimate: f64,
    },

    #[error("invalid dictionary index: family {family} does not admit n = {n}")]
    InvalidDictionary { family: char, n: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("class violation: {0}")]
    ClassViolation(String),

    #[error("claim failed: {claim}: {detail}")]
    ClaimFailed { claim: String, detail: String },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
