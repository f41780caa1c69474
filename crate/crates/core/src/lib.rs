//! Feature-based justifications for ranked-voting outcomes.
//!
//! Given a preference profile and a designated winner, six classic voting
//! criteria are evaluated per candidate (first-place votes, Bucklin score,
//! Borda count, head-to-head record, last-place votes and greatest pairwise
//! opposition). Criteria on which the winner is beaten are discarded, the
//! remaining ones are scored by how far ahead the winner is, and the best
//! few are rendered as short sentences.
//!
//! ```
//! use voteexplain_core::{engine, profile};
//!
//! let p = profile::parse_profile(r#"{
//!     "candidates": ["A", "B", "C"],
//!     "ballots": [
//!         {"order": ["A", "B", "C"], "count": 2},
//!         {"order": ["B", "C", "A"], "count": 1},
//!         {"order": ["C", "B", "A"], "count": 2}
//!     ]
//! }"#).unwrap();
//! let set = engine::explain_named(&p, "B", &engine::ExplainOptions::default()).unwrap();
//! assert_eq!(set.items[0].feature.short_code(), "H");
//! ```

pub mod cli;
pub mod engine;
pub mod error;
pub mod features;
pub mod fixtures;
pub mod profile;
pub mod report;

/// Exact rational used for every feature value and score.
pub type Rational = num_rational::Ratio<i64>;

pub use engine::{
    explain, explain_named, ExplainOptions, Explanation, ExplanationSet, ScoredFeature,
};
pub use error::{EngineError, FeatureError, ProfileError};
pub use features::{FeatureKind, FeatureVector, PairwiseMatrix, Polarity};
pub use profile::{parse_profile, serialize_profile, validate_profile, VoteProfile};
