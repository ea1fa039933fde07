use thiserror::Error;

use crate::psetting::ParamId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad category at byte {position} of {input:?}: {message}")]
pub struct CategoryParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Category(#[from] CategoryParseError),
    #[error("impossible grammar: {0}")]
    ImpossibleGrammar(String),
    #[error("language too degenerate: only {0} construction(s) survive")]
    DegenerateLanguage(usize),
    #[error("sentence type does not parse: {0}")]
    Unparsable(String),
    #[error("no updatable parameter left")]
    NoUpdatableParameter,
    #[error("genome line {line}: {message}")]
    Genome { line: usize, message: String },
    #[error("missing p-setting {0}")]
    MissingSetting(ParamId),
    #[error("unknown language {0:?}")]
    UnknownLanguage(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
