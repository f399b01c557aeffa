use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("duplicate node {index} in regular tuple")]
    DuplicateNode { index: usize },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("halving condition fails at index {index}")]
    HalvingViolated { index: usize },

    #[error("index {index} outside truncation {first}..={last}")]
    OutOfTruncation { index: usize, first: usize, last: usize },

    #[error("sequence is not strictly decreasing at index {index}")]
    NotDecreasing { index: usize },

    #[error("f is not in the ideal: derivative {order} at node {node} is {value:e}")]
    NotInIdeal { node: usize, order: usize, value: f64 },

    #[error("case (ii) requires representative (patch {patch} holds {count} nodes)")]
    RepresentativeRequired { patch: i64, count: usize },

    #[error("insufficient jet order: node {node} needs derivative {order}")]
    InsufficientJetOrder { node: usize, order: usize },

    #[error("unbounded: fewer than k+1 constraint points ({points} points, k = {k})")]
    Unbounded { points: usize, k: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error("interpolation failed: {0}")]
    Interpolation(String),

    #[error("patch index overflow for x/width = {0:e}")]
    PatchOverflow(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
