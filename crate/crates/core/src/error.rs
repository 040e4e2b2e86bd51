use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("element {index} out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("element {0} is not a central involution")]
    NotCentralInvolution(usize),

    #[error("invalid CM type: {0}")]
    InvalidCmType(String),

    #[error("operands live on different frames")]
    FrameMismatch,

    #[error("vector has length {found}, frame order is {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("character lattice of the first CM type is not contained in the rational span of the second")]
    SpanInclusionFails,

    #[error("{0} is not a weight of the first CM type")]
    NotAWeight(String),

    #[error("low-dimensional descriptor: {0}")]
    LowDim(String),

    #[error("input: {0}")]
    Input(String),
}
