//! Exact polynomial and rational-function arithmetic over finite fields.

mod bivariate;
mod parse;
mod rational;
mod univariate;

use thiserror::Error;

pub use bivariate::{sylvester_resultant, Monomial, Poly2};
pub use parse::{parse_poly1, parse_poly2, parse_rational};
pub use rational::{Place, RationalFunction};
pub use univariate::{cmp_poly, Poly1};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("valuation of the zero function is undefined")]
    ZeroValuation,
    #[error("operands over different fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("operands in different variables: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("{0} is not a monic irreducible polynomial")]
    NotIrreducible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a non-constant is not allowed in a polynomial")]
    NonConstantDivisor,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
