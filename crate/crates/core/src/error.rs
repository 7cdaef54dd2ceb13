use std::fmt;

use thiserror::Error;

/// Why a single evaluation had no finite real value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainReason {
    LogNonPositive,
    DivisionByZero,
    SqrtNegative,
    ZeroToNegativePower,
    NegativeBaseFractionalExponent,
    NonFinite,
    OutsideDomain,
    NegativeWeight,
}

impl fmt::Display for DomainReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            DomainReason::LogNonPositive => "logarithm of a non-positive number",
            DomainReason::DivisionByZero => "division by zero",
            DomainReason::SqrtNegative => "square root of a negative number",
            DomainReason::ZeroToNegativePower => "zero raised to a negative power",
            DomainReason::NegativeBaseFractionalExponent => {
                "negative base with a non-integer exponent"
            }
            DomainReason::NonFinite => "non-finite result",
            DomainReason::OutsideDomain => "argument outside the declared domain",
            DomainReason::NegativeWeight => "negative weight function value",
        };
        f.write_str(msg)
    }
}

/// An evaluation that left the real domain. `subject` names the offending
/// sub-expression or catalog function, `input` the value bound to the
/// free variable at the time.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{reason} in `{subject}` at {input}")]
pub struct DomainError {
    pub subject: String,
    pub input: f64,
    pub reason: DomainReason,
}

impl DomainError {
    pub fn new(subject: impl Into<String>, input: f64, reason: DomainReason) -> Self {
        DomainError {
            subject: subject.into(),
            input,
            reason,
        }
    }
}

/// Syntax errors carry a 1-based character column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Domain(#[from] DomainError),

    #[error("invalid interval [{a}, {b}]: {reason}")]
    InvalidInterval {
        a: f64,
        b: f64,
        reason: &'static str,
    },

    #[error("invalid value {value} for {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },

    #[error("`{name}` is not defined on all of [{a}, {b}]")]
    DomainIncompatible { name: String, a: f64, b: f64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("domain error during search at x={x}, y={y}, t={t}: {source}")]
    SearchDomain {
        x: f64,
        y: f64,
        t: f64,
        #[source]
        source: DomainError,
    },

    #[error("domain error during integration at {at}: {source}")]
    QuadDomain {
        at: f64,
        #[source]
        source: DomainError,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
