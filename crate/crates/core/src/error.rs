use thiserror::Error;

/// Errors raised by the group, transform and operator layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("radix sequence is empty")]
    EmptyRadices,
    #[error("radix m_{index} = {value} is below 2")]
    RadixTooSmall { index: usize, value: usize },
    #[error("group order overflows usize")]
    OrderOverflow,
    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("digit x_{coordinate} = {value} is not below m = {radix}")]
    DigitOutOfRange {
        coordinate: usize,
        value: usize,
        radix: usize,
    },
    #[error("point has {found} digits, group has {expected} coordinates")]
    LengthMismatch { expected: usize, found: usize },
    #[error("operands live on different radix sequences")]
    RadixMismatch,
    #[error("coordinate {coordinate} out of range 1..={levels}")]
    CoordinateOutOfRange { coordinate: usize, levels: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("operator family is empty")]
    EmptyFamily,
    #[error("point set is empty")]
    EmptySet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level sequence exhausted before the cutoff criterion was met (bound {bound} at a_nu = {last_level})")]
    LevelsExhausted { bound: f64, last_level: f64 },
    #[error("test battery contains the zero function ({0})")]
    ZeroFunction(String),
    #[error("unbounded witness: {f_id} exceeds lambda = {lambda} on positive measure with zero phi-integral")]
    UnboundedWitness { f_id: String, lambda: f64 },
    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
