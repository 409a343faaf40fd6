use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not positive definite (leading minor {index} is {minor})")]
    NotPositiveDefinite { index: usize, minor: String },

    #[error("tropical polynomial has fewer than two distinct terms; its curve is empty")]
    EmptyCurve,

    #[error("curve has genus 0; there are no cycles")]
    NoCycles,

    #[error("path crosses an unbounded edge; pairing is infinite")]
    InfinitePairing,

    #[error("point ({x}, {y}) is not on the compact part of the curve")]
    NotOnCurve { x: String, y: String },

    #[error("curve is not smooth: {0}")]
    NotSmooth(String),

    #[error("state is outside the phase space: {0}")]
    PhaseSpace(String),

    #[error("vacuum state carries no solitons")]
    EmptyContent,

    #[error("soliton lengths must be strictly increasing: {0:?}")]
    NonStrictLambda(Vec<u64>),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("no torus point reproduces the state {0}")]
    NoMatch(String),

    #[error("{count} torus points reproduce the state {state}")]
    MultipleMatches { state: String, count: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
