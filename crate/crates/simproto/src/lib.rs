//! Wire-format codec for the SimSpark agent interface: s-expression
//! parsing, perceptor decoding, effector encoding, and length-framed
//! transport. The codec is pure; no sockets live here, so a trained policy
//! can be adapted to the real server while every piece stays testable
//! against recorded fixtures.

mod effector;
mod framing;
mod perceptor;
mod sexpr;

pub use effector::{decode_effectors, encode_effectors, EffectorCommand};
pub use framing::{frame, unframe};
pub use perceptor::{decode_perceptors, FootContact, PerceptorFrame};
pub use sexpr::{parse_message, parse_sexpr, SExpr};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum Error {
    #[error("unbalanced parenthesis at byte {0}")]
    Unbalanced(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("unexpected trailing text at byte {0}")]
    TrailingText(usize),
    #[error("malformed {node} node: {reason}")]
    MalformedNode { node: String, reason: String },
    #[error("non-finite velocity for effector {0}")]
    NonFiniteVelocity(String),
    #[error("frame truncated: need {need} bytes, have {have}")]
    Truncated { need: usize, have: usize },
    #[error("declared length {declared} does not match payload {actual}")]
    LengthMismatch { declared: usize, actual: usize },
    #[error("payload too large: {0} bytes")]
    PayloadTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
