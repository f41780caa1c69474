use thiserror::Error;

use crate::features::FeatureKind;
use crate::profile::Violation;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("malformed profile document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ballot group #{group} names unknown candidate {name:?}")]
    UnknownCandidate { group: usize, name: String },
    #[error("invalid profile: {}", join(.0))]
    Invalid(Vec<Violation>),
}

impl ProfileError {
    /// Every violation carried by this error, rendered one per line.
    pub fn violations(&self) -> Vec<String> {
        match self {
            ProfileError::Invalid(v) => v.iter().map(ToString::to_string).collect(),
            other => vec![other.to_string()],
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("feature {0} is undefined with fewer than two candidates")]
    Inapplicable(FeatureKind),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("candidate index {index} out of range for {m} candidates")]
    UnknownWinner { index: usize, m: usize },
    #[error("unknown candidate {0:?}")]
    UnknownWinnerName(String),
    #[error("number of explanations must be at least 1")]
    ZeroExplanations,
    #[error("winner is strictly beaten on feature {0}; it cannot be scored")]
    Dominated(FeatureKind),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixtureError {
    #[error("instance {id}: {reason}")]
    InvalidInstance { id: String, reason: String },
    #[error("malformed fixture data: {0}")]
    Malformed(String),
}
