use alloc::string::String;
use core::fmt;

/// Where inside one step of the multi-step scheme a value left the safe range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Inner stage producing `y_n^i` (1-based, as in the scheme).
    Inner(usize),
    /// Outer stage producing `x_{n+1}`.
    Outer,
    /// Post-step evaluation of `T_1^n x_{n+1}` for the `d_n` diagnostic.
    Diagnostic,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Inner(i) => write!(f, "y^{i}"),
            Stage::Outer => f.write_str("x_next"),
            Stage::Diagnostic => f.write_str("d_n"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed value: empty vector, non-finite entry, parameter outside its domain.
    InvalidInput(String),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A closed-form or iterated power left the finite range of `f64`.
    Range {
        n: u64,
    },
    /// The supplied point is not a fixed point of the operator.
    NotFixedPoint {
        residual: f64,
    },
    /// The iteration exceeded the divergence guard.
    Divergence {
        n: u64,
        stage: Stage,
    },
    /// Configuration failed validation; `field` is a dotted path.
    Config {
        field: String,
        message: String,
    },
    /// An exact identity that must hold by construction did not.
    Consistency(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Range { n } => write!(f, "operator power T^{n} overflows the f64 range"),
            Error::NotFixedPoint { residual } => {
                write!(f, "x* is not a fixed point (residual {residual:e})")
            }
            Error::Divergence { n, stage } => {
                write!(f, "iteration diverged at n = {n} in stage {stage}")
            }
            Error::Config { field, message } => write!(f, "{field}: {message}"),
            Error::Consistency(msg) => write!(f, "internal consistency failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        message: message.into(),
    }
}
