use thiserror::Error;

/// Errors raised by the modelling, estimation, design and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter vector has length {got}, model specification expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid exit attributes: {0}")]
    InvalidAttributes(String),

    #[error("invalid scenario `{id}`: {reason}")]
    InvalidScenario { id: String, reason: String },

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("unknown attribute `{0}` (expected one of np, dist, smoke, fam)")]
    UnknownAttribute(String),

    #[error("invalid observation: {0}")]
    InvalidObservation(String),

    #[error("no observations")]
    EmptyData,

    #[error("coefficient(s) not identified by the data: {}", .0.join(", "))]
    NotIdentified(Vec<String>),

    #[error("negative or non-finite variance for coefficient `{name}`: {variance}")]
    InvalidVariance { name: String, variance: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid factor levels: {0}")]
    InvalidLevels(String),

    #[error("invalid design request: {0}")]
    InvalidDesign(String),

    #[error("model is not identifiable with designs of {size} scenario(s): every visited design has a singular information matrix")]
    SingularDesign { size: usize },

    #[error("invalid sensitivity configuration: {0}")]
    InvalidSweep(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
