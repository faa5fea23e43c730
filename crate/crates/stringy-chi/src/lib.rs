//! Exact symbolic engine for stringy Hirzebruch classes of singular
//! Weierstrass fibrations.
//!
//! The crate computes, in exact rational arithmetic, the generating
//! function `Q_Y` of stringy chi_y-genus contributions for an elliptically
//! fibered variety with prescribed crepant resolution data, and derives
//! from it chi_y coefficients, stringy Euler characteristics and Hodge
//! number relations.  Two independent routes to `Q_Y` are implemented — a
//! resolution pipeline (blowup bookkeeping, adjunction factors, exceptional
//! and projective-bundle pushforwards) and a catalog of closed-form
//! expressions — and the two can be checked against each other to any
//! truncation degree.

pub mod catalog;
pub mod cli;
pub mod graded;
pub mod hirzebruch;
pub mod pipeline;
pub mod pushforward;
pub mod rational;

pub use graded::{CharSeries, GradedPoly, RingCtx, Var};
pub use rational::{YPolynomial, YRational};

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by the zero rational function.
    DivisionByZero,
    /// Evaluation of a rational function at a pole of its reduced form.
    PoleAt(String),
    /// `invert` called on a graded polynomial whose degree-0 part is not
    /// a unit of the coefficient field.
    NonUnitConstantTerm,
    /// A series operation whose precondition on the degree-0 part fails
    /// (`exp_series` wants 0, `log_series` wants 1, `apply_series` wants a
    /// zero-constant divisor argument).
    BadConstantTerm { expected: &'static str, found: String },
    /// A substitution rule replaces a variable by a polynomial that is not
    /// homogeneous of the variable's degree.
    DegreeIncompatibleSubstitution { var: String, degree: usize },
    /// A polynomial mentions a variable that the target ring lacks.
    UnknownVariable(String),
    /// A truncated series is too short for the requested composition.
    SeriesOrderTooSmall { need: usize, have: usize },
    /// A blowup center names a section absent from the class table.
    UnknownGenerator(String),
    /// A chi_y coefficient failed to reduce to a polynomial in y.
    NonPolynomialCoefficient { monomial: String, value: String },
    /// Catalog file could not be parsed; carries a line/field diagnostic.
    CatalogFormat(String),
    /// A gauge label that is not in the catalog.
    UnknownModel(String),
    /// Pipeline and catalog disagree; carries the first differing monomial.
    VerifyMismatch { model: String, monomial: String, pipeline: String, catalog: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero rational function"),
            Error::PoleAt(y0) => {
                write!(f, "pole at y = {y0}: evaluate after simplification")
            }
            Error::NonUnitConstantTerm => {
                write!(f, "constant term is not a unit; cannot invert")
            }
            Error::BadConstantTerm { expected, found } => {
                write!(f, "series argument must have constant term {expected}, found {found}")
            }
            Error::DegreeIncompatibleSubstitution { var, degree } => {
                write!(f, "substitution for {var} is not homogeneous of degree {degree}")
            }
            Error::UnknownVariable(v) => write!(f, "variable {v} is not in the target ring"),
            Error::SeriesOrderTooSmall { need, have } => {
                write!(f, "series order {have} is smaller than required order {need}")
            }
            Error::UnknownGenerator(g) => {
                write!(f, "blowup center names unknown section `{g}`")
            }
            Error::NonPolynomialCoefficient { monomial, value } => {
                write!(f, "coefficient of {monomial} is not polynomial in y: {value}")
            }
            Error::CatalogFormat(msg) => write!(f, "model file: {msg}"),
            Error::UnknownModel(m) => write!(f, "unknown model `{m}`"),
            Error::VerifyMismatch { model, monomial, pipeline, catalog } => write!(
                f,
                "{model}: pipeline and catalog disagree at {monomial}: {pipeline} vs {catalog}"
            ),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
