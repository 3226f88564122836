//! Crate-wide error type.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// A constructor or operation argument is outside its admissible range.
    InvalidParameter(String),
    /// A value is outside the mathematical domain of the operation (e.g. an
    /// encoder input outside [0,1]).
    Domain(String),
    /// Dimension / length mismatch between operands.
    Shape(String),
    /// A requested allocation exceeds a configured resource cap.
    Resource(String),
    /// Detector calibration failed (degenerate intensities).
    Calibration(String),
    /// A neuron budget cannot be distributed over the requested depth.
    Allocation(String),
    /// A linear system is singular or the solve did not meet its residual bound.
    IllConditioned(String),
    /// A cross-validation protocol precondition is violated.
    Protocol(String),
    /// A file does not match its expected binary or textual layout.
    Format(String),
    /// An operation was called on an object in the wrong lifecycle state.
    State(String),
    /// Invalid runtime input (e.g. an empty sample sequence).
    InvalidInput(String),
    Io(std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Shape(m) => write!(f, "shape error: {m}"),
            Error::Resource(m) => write!(f, "resource error: {m}"),
            Error::Calibration(m) => write!(f, "calibration error: {m}"),
            Error::Allocation(m) => write!(f, "allocation error: {m}"),
            Error::IllConditioned(m) => write!(f, "ill-conditioned system: {m}"),
            Error::Protocol(m) => write!(f, "protocol error: {m}"),
            Error::Format(m) => write!(f, "format error: {m}"),
            Error::State(m) => write!(f, "state error: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
