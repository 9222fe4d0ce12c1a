use thiserror::Error;

use crate::generator::ValidationReport;
use crate::morphism::Counterexample;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("distribution has {found} weights but the generator has {expected} states")]
    DistributionMismatch { expected: usize, found: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("state `{0}` has an empty relation set; the probabilistic lift is undefined")]
    EmptyRelation(String),
    #[error("word table would hold {requested} entries, above the limit of {limit}")]
    SizeLimit { requested: u128, limit: u128 },
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("morphisms do not chain: {0}")]
    ChainMismatch(String),
    #[error("map is not transition-preserving: {0}")]
    NotTransitionPreserving(Box<Counterexample>),
    #[error("conditional row for `{0}` does not sum to 1")]
    RowNotNormalized(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("{0}")]
    IrrationalRotation(String),
    #[error("invalid generator:\n{0}")]
    InvalidGenerator(ValidationReport),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
