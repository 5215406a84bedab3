use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative probability mass {value} at index {index}")]
    NegativeMass { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1 within 1e-9")]
    NotNormalized { sum: f64 },

    #[error("non-finite probability at index {index}")]
    NonFinite { index: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{0} must have at least one category label")]
    EmptyLabels(&'static str),

    #[error("sample is empty")]
    EmptySample,

    #[error("empty category string in observation {row}")]
    EmptyCategory { row: usize },

    #[error("degenerate entropy: {0}")]
    DegenerateEntropy(String),

    #[error("alpha {alpha} outside admissible range {range}")]
    InvalidAlpha { alpha: f64, range: &'static str },

    #[error("invalid convex weights: {0}")]
    InvalidWeights(String),

    #[error("{weights} weights given for {specs} child specs")]
    WeightMismatch { weights: usize, specs: usize },

    #[error("function g is not strictly monotone on the probe grid: {0}")]
    NotMonotone(String),

    #[error("cannot parse complexity spec {input:?}: {reason}")]
    SpecParse { input: String, reason: String },

    #[error("invalid entropy interval [{c1}, {c2}]: need 0 < c1 <= c2 < inf")]
    InvalidTheta { c1: f64, c2: f64 },

    #[error("invalid entropy ratios gamma1={gamma1}, gamma2={gamma2}: need 0 < gamma1 <= gamma2")]
    InvalidGamma { gamma1: f64, gamma2: f64 },

    #[error("unsupported kind: {0}")]
    UnsupportedKind(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("column {coarse:?} is not a function of column {fine:?}")]
    NotARefinement { coarse: String, fine: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("csv error: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
