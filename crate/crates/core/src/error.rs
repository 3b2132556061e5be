use thiserror::Error;

/// Errors raised by construction and composition of posets and iposets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {point} out of range for a poset with {size} points")]
    PointOutOfRange { point: usize, size: usize },

    #[error("relation contains a cycle through point {point}")]
    Cycle { point: usize },

    #[error("too many points: {size} (at most {max} supported)")]
    TooManyPoints { size: usize, max: usize },

    #[error("{side} interface lists point {point} more than once")]
    DuplicateInterface { side: Side, point: usize },

    #[error("source point {point} is not minimal")]
    SourceNotMinimal { point: usize },

    #[error("target point {point} is not maximal")]
    TargetNotMaximal { point: usize },

    #[error("cannot glue: left operand has {left_targets} targets, right operand has {right_sources} sources")]
    InterfaceMismatch { left_targets: usize, right_sources: usize },

    #[error("interface arity {arity} exceeds point count {points}")]
    Arity { arity: usize, points: usize },

    #[error("not a permutation of 0..{size}")]
    InvalidPermutation { size: usize },

    #[error("operands do not compose to the same iposet")]
    NotComposable,

    #[error("no interpolating factor found")]
    NoInterpolant,

    #[error("not an interval order")]
    NotIntervalOrder,

    #[error("maximal antichains {first:?} and {second:?} are incomparable")]
    NotLinear { first: Vec<usize>, second: Vec<usize> },

    #[error("source and target interfaces order the isolated points {first} and {second} differently")]
    InterfaceCrossing { first: usize, second: usize },

    #[error("invalid interval sequence: {0}")]
    InvalidSequence(String),

    #[error("interval sequence is not closed: point {point} never ends")]
    NotClosed { point: usize },

    #[error("{size} points exceeds the brute-force limit of {max}")]
    TooLarge { size: usize, max: usize },

    #[error("{points} points exceeds the configured bound of {bound}")]
    BoundExceeded { points: usize, bound: usize },

    #[error("budget of {seconds}s exhausted")]
    BudgetExhausted { seconds: u64 },

    #[error("term syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("malformed document: {0}")]
    Document(String),

    #[error("malformed canonical form")]
    MalformedCanon,
}

/// Which interface of an iposet an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Source => f.write_str("source"),
            Side::Target => f.write_str("target"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
