use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe size {0} is out of range (1..=64)")]
    UniverseSize(usize),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("element {index} is out of range for a universe of {size} elements")]
    ElementOutOfRange { index: usize, size: usize },

    #[error("universe mismatch: {left} elements vs {right} elements")]
    UniverseMismatch { left: usize, right: usize },

    #[error("operation requires a non-empty family")]
    EmptyFamily,

    #[error("materializing {estimate} candidates exceeds the ceiling of {ceiling}")]
    TooLarge { estimate: u128, ceiling: u128 },

    #[error("law `{law}` expects {expected} operands, got {got}")]
    Arity { law: String, expected: usize, got: usize },

    #[error("operand {position} of law `{law}` must be {expected}")]
    OperandKind { law: String, position: usize, expected: &'static str },

    #[error("operand {position} of law `{law}` is not union-closed")]
    NotSemigroup { law: String, position: usize },

    #[error("unknown law `{0}`")]
    UnknownLaw(String),

    #[error("{0}")]
    Bound(String),

    #[error("invalid group: {0}")]
    Group(String),

    #[error("invalid measure: {0}")]
    Measure(String),
}
