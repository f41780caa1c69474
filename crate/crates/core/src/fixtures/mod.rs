//! The six published three-candidate instances and the search that pins
//! each vote distribution to concrete ballots.
//!
//! Each instance gives six counts over "the six orders of three candidates"
//! without saying which count belongs to which order, plus the winner's
//! undominated features and the explanations presented for it. The search
//! tries every slot-to-order bijection and every winner, keeps the
//! assignments whose surviving feature set matches exactly, and then checks
//! the explanation set. Instances sharing a distribution are searched
//! jointly so both use the same assignment.

pub mod reference;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{self, ExplainOptions, FilterSemantics};
use crate::error::FixtureError;
use crate::features::FeatureKind;
use crate::profile::{BallotGroup, CandidateSet, PreferenceOrder, ProfileDocument, VoteProfile};

pub use reference::{reference_explain, ReferenceOutcome, ReferenceScore};

/// Voters per published instance.
pub const INSTANCE_VOTERS: u64 = 29;

/// Number of explanations presented per instance.
pub const INSTANCE_N: usize = 3;

pub const LABELS: [&str; 3] = ["A", "B", "C"];

/// All complete orders of three candidates, in lexicographic order.
pub const ORDERS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

const COMMITTED: &str = include_str!("../../fixtures/published_instances.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedInstance {
    pub id: String,
    pub distribution: Vec<u64>,
    pub expected_winner_features: BTreeSet<FeatureKind>,
    /// Listing order as published.
    pub expected_explanations: Vec<FeatureKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shares_distribution_with: Option<String>,
}

impl PublishedInstance {
    fn new(
        id: &str,
        distribution: [u64; 6],
        features: &[FeatureKind],
        explanations: &[FeatureKind],
        partner: Option<&str>,
    ) -> Self {
        Self {
            id: id.to_string(),
            distribution: distribution.to_vec(),
            expected_winner_features: features.iter().copied().collect(),
            expected_explanations: explanations.to_vec(),
            shares_distribution_with: partner.map(str::to_string),
        }
    }

    pub fn check(&self) -> Result<(), FixtureError> {
        let fail = |reason: String| {
            Err(FixtureError::InvalidInstance {
                id: self.id.clone(),
                reason,
            })
        };
        if self.distribution.len() != ORDERS.len() {
            return fail(format!(
                "expected {} counts, found {}",
                ORDERS.len(),
                self.distribution.len()
            ));
        }
        let total: u64 = self.distribution.iter().sum();
        if total != INSTANCE_VOTERS {
            return fail(format!("counts sum to {total}, expected {INSTANCE_VOTERS}"));
        }
        if let Some(k) = self
            .expected_explanations
            .iter()
            .find(|k| !self.expected_winner_features.contains(k))
        {
            return fail(format!(
                "explanation {k} is not among the winner's features"
            ));
        }
        Ok(())
    }
}

/// The published instances, with abstract candidate labels.
pub fn published_instances() -> Vec<PublishedInstance> {
    use FeatureKind::*;
    let all = [Plurality, Borda, HeadToHead, Bucklin, Gpo, LastPlace];
    let no_plurality = [Borda, HeadToHead, Bucklin, Gpo, LastPlace];
    vec![
        PublishedInstance::new(
            "1",
            [6, 4, 4, 7, 4, 4],
            &all,
            &[HeadToHead, LastPlace, Bucklin],
            None,
        ),
        PublishedInstance::new(
            "2",
            [6, 2, 8, 5, 4, 4],
            &all,
            &[HeadToHead, Gpo, LastPlace, Bucklin],
            None,
        ),
        PublishedInstance::new(
            "3",
            [1, 4, 7, 6, 7, 4],
            &[Plurality],
            &[Plurality],
            Some("3a"),
        ),
        PublishedInstance::new(
            "3a",
            [1, 4, 7, 6, 7, 4],
            &no_plurality,
            &[HeadToHead, Bucklin, LastPlace],
            Some("3"),
        ),
        PublishedInstance::new(
            "4",
            [5, 2, 6, 4, 6, 6],
            &no_plurality,
            &[LastPlace, Bucklin, HeadToHead],
            Some("4a"),
        ),
        PublishedInstance::new(
            "4a",
            [5, 2, 6, 4, 6, 6],
            &[Plurality],
            &[Plurality],
            Some("4"),
        ),
    ]
}

/// Every bijection of `0..n` in lexicographic order.
pub fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

pub fn order_label(order: &[usize]) -> String {
    order
        .iter()
        .map(|&c| LABELS[c])
        .collect::<Vec<_>>()
        .join(">")
}

/// Profile over `A, B, C` placing `distribution[i]` voters on order
/// `ORDERS[slot_to_order[i]]`.
pub fn assignment_profile(distribution: &[u64], slot_to_order: &[usize]) -> VoteProfile {
    let groups = distribution
        .iter()
        .zip(slot_to_order)
        .map(|(&count, &o)| {
            BallotGroup::new(PreferenceOrder::new_unchecked(ORDERS[o].to_vec()), count)
        })
        .collect();
    VoteProfile::new(CandidateSet::new_unchecked(LABELS), groups)
        .expect("assignment over a valid distribution is a valid profile")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    /// Surviving features equal the published winner features.
    pub winner_features: bool,
    /// Top-3 explanations (tie-extended) equal the published set.
    pub explanation_set: bool,
    /// Published listing order is consistent with descending scores.
    pub explanation_order: bool,
}

impl Verification {
    pub fn consistent(&self) -> bool {
        self.winner_features && self.explanation_set
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedAssignment {
    pub instance_id: String,
    pub slot_to_order: Vec<usize>,
    pub winner: usize,
    pub semantics: FilterSemantics,
    pub verified: Verification,
}

impl DerivedAssignment {
    pub fn profile(&self, inst: &PublishedInstance) -> VoteProfile {
        assignment_profile(&inst.distribution, &self.slot_to_order)
    }
}

fn verify(
    inst: &PublishedInstance,
    p: &VoteProfile,
    winner: usize,
    semantics: FilterSemantics,
) -> Verification {
    let survivors =
        engine::filter_features_with(p, winner, &FeatureKind::ALL, semantics).unwrap_or_default();
    if survivors != inst.expected_winner_features {
        return Verification::default();
    }
    let opts = ExplainOptions {
        n: INSTANCE_N,
        seed: 0,
        audit: true,
    };
    let set = engine::explain_with(p, winner, &opts, semantics)
        .expect("winner index is in range and n is positive");
    let expected: BTreeSet<FeatureKind> = inst.expected_explanations.iter().copied().collect();
    let explanation_set = set.features() == expected;
    let score = |k: &FeatureKind| {
        set.surviving_features
            .iter()
            .find(|s| s.feature == *k)
            .map(|s| s.normalized_score)
    };
    let explanation_order = explanation_set
        && inst
            .expected_explanations
            .windows(2)
            .all(|w| score(&w[0]) >= score(&w[1]));
    Verification {
        winner_features: true,
        explanation_set,
        explanation_order,
    }
}

/// Every assignment (bijection × winner) whose surviving feature set
/// matches the instance, in lexicographic order, with verification flags.
pub fn derive_assignments(
    inst: &PublishedInstance,
    semantics: FilterSemantics,
) -> Result<Vec<DerivedAssignment>, FixtureError> {
    inst.check()?;
    let mut out = Vec::new();
    for perm in lex_permutations(ORDERS.len()) {
        let p = assignment_profile(&inst.distribution, &perm);
        for winner in 0..LABELS.len() {
            let verified = verify(inst, &p, winner, semantics);
            if verified.winner_features {
                out.push(DerivedAssignment {
                    instance_id: inst.id.clone(),
                    slot_to_order: perm.clone(),
                    winner,
                    semantics,
                    verified,
                });
            }
        }
    }
    Ok(out)
}

/// Assignment pairs for two instances sharing one distribution: same
/// bijection, different winners.
pub fn derive_joint(
    a: &PublishedInstance,
    b: &PublishedInstance,
    semantics: FilterSemantics,
) -> Result<Vec<(DerivedAssignment, DerivedAssignment)>, FixtureError> {
    if a.distribution != b.distribution {
        return Err(FixtureError::InvalidInstance {
            id: b.id.clone(),
            reason: format!("distribution differs from paired instance {}", a.id),
        });
    }
    let left = derive_assignments(a, semantics)?;
    let right = derive_assignments(b, semantics)?;
    let mut out = Vec::new();
    for x in &left {
        for y in right
            .iter()
            .filter(|y| y.slot_to_order == x.slot_to_order && y.winner != x.winner)
        {
            out.push((x.clone(), y.clone()));
        }
    }
    Ok(out)
}

/// Search outcome for one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceDerivation {
    pub instance: PublishedInstance,
    /// Filter reading under which a consistent assignment exists.
    pub semantics: Option<FilterSemantics>,
    /// Assignments matching the winner features (jointly, for pairs).
    pub feature_matches: usize,
    /// Assignments that also match the explanation set.
    pub consistent_matches: usize,
    /// Lexicographically first fully consistent assignment.
    pub canonical: Option<DerivedAssignment>,
    pub failure: Option<String>,
}

impl InstanceDerivation {
    pub fn is_consistent(&self) -> bool {
        self.canonical.is_some()
    }

    fn failed(instance: &PublishedInstance, reason: String) -> Self {
        Self {
            instance: instance.clone(),
            semantics: None,
            feature_matches: 0,
            consistent_matches: 0,
            canonical: None,
            failure: Some(reason),
        }
    }
}

fn derive_single(inst: &PublishedInstance) -> InstanceDerivation {
    let mut first_failure = None;
    for semantics in [FilterSemantics::Weak, FilterSemantics::Strict] {
        let found = match derive_assignments(inst, semantics) {
            Ok(f) => f,
            Err(e) => return InstanceDerivation::failed(inst, e.to_string()),
        };
        let consistent: Vec<_> = found.iter().filter(|a| a.verified.consistent()).collect();
        if let Some(&first) = consistent.first() {
            return InstanceDerivation {
                instance: inst.clone(),
                semantics: Some(semantics),
                feature_matches: found.len(),
                consistent_matches: consistent.len(),
                canonical: Some(first.clone()),
                failure: None,
            };
        }
        first_failure.get_or_insert_with(|| {
            if found.is_empty() {
                format!("no assignment reproduces winner features ({} filter)", semantics.as_str())
            } else {
                format!(
                    "{} assignments reproduce winner features but none the explanation set ({} filter)",
                    found.len(),
                    semantics.as_str()
                )
            }
        });
    }
    InstanceDerivation::failed(inst, first_failure.unwrap_or_default())
}

fn derive_pair(
    a: &PublishedInstance,
    b: &PublishedInstance,
) -> (InstanceDerivation, InstanceDerivation) {
    let mut first_failure = None;
    for semantics in [FilterSemantics::Weak, FilterSemantics::Strict] {
        let pairs = match derive_joint(a, b, semantics) {
            Ok(p) => p,
            Err(e) => {
                let msg = e.to_string();
                return (
                    InstanceDerivation::failed(a, msg.clone()),
                    InstanceDerivation::failed(b, msg),
                );
            }
        };
        let consistent: Vec<_> = pairs
            .iter()
            .filter(|(x, y)| x.verified.consistent() && y.verified.consistent())
            .collect();
        if let Some(&(x, y)) = consistent.first() {
            let make = |inst: &PublishedInstance, canon: &DerivedAssignment| InstanceDerivation {
                instance: inst.clone(),
                semantics: Some(semantics),
                feature_matches: pairs.len(),
                consistent_matches: consistent.len(),
                canonical: Some(canon.clone()),
                failure: None,
            };
            return (make(a, x), make(b, y));
        }
        first_failure.get_or_insert_with(|| {
            if pairs.is_empty() {
                format!(
                    "no shared assignment reproduces winner features of {} and {} ({} filter)",
                    a.id,
                    b.id,
                    semantics.as_str()
                )
            } else {
                format!(
                    "{} shared assignments reproduce winner features of {} and {} but none both explanation sets ({} filter)",
                    pairs.len(),
                    a.id,
                    b.id,
                    semantics.as_str()
                )
            }
        });
    }
    let msg = first_failure.unwrap_or_default();
    (
        InstanceDerivation::failed(a, msg.clone()),
        InstanceDerivation::failed(b, msg),
    )
}

/// Runs the search for every instance, pairing instances that declare a
/// shared distribution. Output follows input order.
pub fn derive_all(instances: &[PublishedInstance]) -> Vec<InstanceDerivation> {
    let mut out: Vec<Option<InstanceDerivation>> = vec![None; instances.len()];
    for (i, inst) in instances.iter().enumerate() {
        if out[i].is_some() {
            continue;
        }
        let partner = inst.shares_distribution_with.as_ref().and_then(|pid| {
            instances
                .iter()
                .enumerate()
                .find(|(j, other)| *j != i && &other.id == pid)
                .map(|(j, _)| j)
        });
        match partner {
            Some(j) if out[j].is_none() => {
                let (a, b) = derive_pair(inst, &instances[j]);
                out[i] = Some(a);
                out[j] = Some(b);
            }
            _ => out[i] = Some(derive_single(inst)),
        }
    }
    out.into_iter()
        .map(|d| d.expect("every instance derived"))
        .collect()
}

/// One line of the committed fixture file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub id: String,
    pub distribution: Vec<u64>,
    /// Order assigned to each distribution slot, e.g. `"A>C>B"`.
    pub slot_orders: Vec<String>,
    pub profile: ProfileDocument,
    pub winner: String,
    pub winner_features: Vec<FeatureKind>,
    pub expected_explanations: Vec<FeatureKind>,
    pub semantics: String,
    pub verified: Verification,
}

impl FixtureRecord {
    pub fn from_derivation(d: &InstanceDerivation) -> Option<Self> {
        let canon = d.canonical.as_ref()?;
        let inst = &d.instance;
        let p = canon.profile(inst);
        Some(Self {
            id: inst.id.clone(),
            distribution: inst.distribution.clone(),
            slot_orders: canon
                .slot_to_order
                .iter()
                .map(|&o| order_label(&ORDERS[o]))
                .collect(),
            profile: ProfileDocument::from(&p),
            winner: LABELS[canon.winner].to_string(),
            winner_features: inst.expected_winner_features.iter().copied().collect(),
            expected_explanations: inst.expected_explanations.clone(),
            semantics: canon.semantics.as_str().to_string(),
            verified: canon.verified,
        })
    }

    pub fn vote_profile(&self) -> VoteProfile {
        self.profile
            .clone()
            .into_profile()
            .expect("fixture profiles are valid")
    }

    pub fn winner_index(&self) -> usize {
        self.profile
            .candidates
            .iter()
            .position(|c| c == &self.winner)
            .expect("fixture winner is a candidate")
    }
}

/// Fixture file contents for a completed derivation.
pub fn fixture_file(derivations: &[InstanceDerivation]) -> String {
    let records: Vec<FixtureRecord> = derivations
        .iter()
        .filter_map(FixtureRecord::from_derivation)
        .collect();
    let mut s = serde_json::to_string_pretty(&records).expect("fixtures serialize");
    s.push('\n');
    s
}

/// The fixture file shipped with the crate.
pub fn committed_fixtures() -> Vec<FixtureRecord> {
    parse_fixture_file(COMMITTED).expect("committed fixture file parses")
}

pub fn committed_fixture_text() -> &'static str {
    COMMITTED
}

pub fn parse_fixture_file(text: &str) -> Result<Vec<FixtureRecord>, FixtureError> {
    serde_json::from_str(text).map_err(|e| FixtureError::Malformed(e.to_string()))
}

pub fn parse_instances(text: &str) -> Result<Vec<PublishedInstance>, FixtureError> {
    serde_json::from_str(text).map_err(|e| FixtureError::Malformed(e.to_string()))
}

impl fmt::Display for PublishedInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dist: Vec<String> = self.distribution.iter().map(u64::to_string).collect();
        let feats: Vec<&str> = self
            .expected_winner_features
            .iter()
            .map(|k| k.short_code())
            .collect();
        let expl: Vec<&str> = self
            .expected_explanations
            .iter()
            .map(|k| k.short_code())
            .collect();
        write!(
            f,
            "{:<4} {:<14} {:<14} {}",
            self.id,
            dist.join("/"),
            feats.join("/"),
            expl.join("/")
        )
    }
}
