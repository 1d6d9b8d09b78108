use thiserror::Error;

use crate::pattern::Pattern;

/// Errors raised by the library. Validation failures are distinguished from
/// internal guard trips so front ends can map them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("index {index} out of range for {op} on {pattern} (valid: {min}..={max})")]
    IndexOutOfRange {
        op: &'static str,
        pattern: Pattern,
        index: usize,
        min: usize,
        max: usize,
    },

    #[error("degree bound d = {0} must be an even integer >= 2")]
    InvalidDegree(u32),

    #[error("pattern {pattern} has norm {norm}, exceeding d = {d}")]
    NormTooLarge { pattern: Pattern, norm: u32, d: u32 },

    #[error("pattern {pattern} has norm parity {norm} mod 2, but d = {d} (parity policy: matched)")]
    ParityMismatch { pattern: Pattern, norm: u32, d: u32 },

    #[error("cannot lift from d = {from} to d' = {to}: need d' >= d and d' = d mod 2")]
    InvalidLift { from: u32, to: u32 },

    #[error("set is not closed: successor {missing} of {member} is missing")]
    NotClosed { member: Pattern, missing: Pattern },

    #[error("{0} is not defined for the empty poset")]
    EmptyPoset(&'static str),

    #[error("the empty pattern has no characteristic chain")]
    EmptyPattern,

    #[error("boundary squared is nonzero at degree {degree}")]
    NonzeroSquare { degree: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mismatched ring parameters: (d, k) = ({0}, {1}) vs ({2}, {3})")]
    RingMismatch(u32, u32, u32, u32),

    #[error("smith normal form aborted: {0}")]
    Snf(#[from] crate::snf::SnfError),
}

impl Error {
    /// True for errors caused by bad input rather than an internal guard.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Snf(_) | Error::NonzeroSquare { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
