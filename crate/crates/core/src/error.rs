use thiserror::Error;

use crate::shift::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown algebra kind `{0}` (expected one of a2even, a2odd, d2, d3_4)")]
    UnknownKind(String),

    #[error("{kind}: n = {n} is out of range ({constraint})")]
    RankOutOfRange {
        kind: &'static str,
        n: u32,
        constraint: &'static str,
    },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: u32, max: u32 },

    #[error("variable {label} is not defined for {kind}")]
    BadLabel { label: String, kind: &'static str },

    #[error("mixed-family arithmetic: {0:?} with {1:?}")]
    MixedFamily(Family, Family),

    #[error("expected a polynomial in the {expected:?} family")]
    WrongFamily { expected: Family },

    #[error("{operation} is only defined for {allowed}, got {kind}")]
    Unsupported {
        operation: &'static str,
        allowed: &'static str,
        kind: &'static str,
    },

    #[error("coefficient of degree {degree} requested but the series is truncated at {cutoff}")]
    CutoffTooSmall { degree: usize, cutoff: usize },

    #[error("cannot apply a truncated operator: the sum would not be finite")]
    TruncatedOperator,

    #[error("invalid index set: {0}")]
    BadIndices(String),

    #[error("Casorati frame is degenerate after {attempts} reseeds")]
    DegenerateFrame { attempts: u32 },

    #[error("window too small: need position {needed}, frame holds {available}")]
    WindowOverflow { needed: usize, available: usize },

    #[error("evaluation hit a pole near u = {0}")]
    NearPole(String),

    #[error(transparent)]
    Parse(#[from] crate::ring::text::ParseError),
}
