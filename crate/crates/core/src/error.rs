//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested working precision is below the supported minimum.
    #[error("precision {got} bits is below the minimum of {min} bits")]
    PrecisionTooLow { got: u32, min: u32 },

    /// A sign or width target could not be met even at the precision cap.
    #[error("precision exhausted: target unreachable at cap of {cap} bits")]
    PrecisionExhausted { cap: u32 },

    /// Result magnitude exceeds what the representation is allowed to hold.
    #[error("magnitude overflow in exponential")]
    Overflow,

    /// Shift parameter of the Burnside family outside [0, 1].
    #[error("shift {0} out of range: must lie in [0, 1]")]
    ShiftOutOfRange(String),

    /// Chen correction order outside {0, 1, 2}.
    #[error("invalid correction order {0}: must be 0, 1, or 2")]
    InvalidOrder(u8),

    /// Structural misuse of an API (bad range, empty list, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed numeric literal.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
