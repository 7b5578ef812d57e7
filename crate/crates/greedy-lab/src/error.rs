use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("index {0} is not a positive integer")]
    InvalidIndex(usize),
    #[error("no sign given for index {0}")]
    MissingSign(usize),
    #[error("sign for index {index} has modulus {value}, expected 1")]
    InvalidSign { index: usize, value: i64 },
    #[error("sequence is not strictly increasing at position {0}")]
    NotIncreasing(usize),
    #[error("sequence has no element at position {0}")]
    MissingElement(usize),
    #[error("window {window} too small: {needed}")]
    Window { window: usize, needed: String },
    #[error("infeasible enumeration: about {estimated} candidates exceeds the limit {limit}")]
    Infeasible { estimated: u128, limit: u128 },
    #[error("too many greedy sets: ties expand past {0}")]
    TooManyGreedySets(usize),
    #[error("truncation level must be positive, got {0}")]
    NonPositiveLevel(f64),
    #[error("index {0} is not covered by any block of the norm")]
    Uncovered(usize),
    #[error("unknown norm `{0}`")]
    UnknownNorm(String),
    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("growth condition violated: {0}")]
    Growth(String),
    #[error("missing ingredient: {0}")]
    MissingIngredient(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
