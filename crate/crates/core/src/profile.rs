//! Candidates, ranked ballots and preference profiles.
//!
//! A profile is a multiset of complete strict rankings, stored as groups of
//! identical ballots with a multiplicity. Candidates are identified by name
//! on the wire and by index everywhere else.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ProfileError;

/// Ordered, duplicate-free list of candidate names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    names: Vec<String>,
}

impl CandidateSet {
    pub fn new<I, S>(names: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set = Self::new_unchecked(names);
        let issues = set.violations();
        match issues.into_iter().next() {
            Some(v) => Err(ProfileError::Invalid(vec![v])),
            None => Ok(set),
        }
    }

    /// Builds a set without checking its invariants. Use
    /// [`validate_profile`] to inspect the result.
    pub fn new_unchecked<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        self.names.get(index).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.names.is_empty() {
            out.push(Violation::NoCandidates);
        }
        let mut seen = HashSet::new();
        for (i, name) in self.names.iter().enumerate() {
            if name.is_empty() {
                out.push(Violation::EmptyCandidateName { index: i });
            } else if !seen.insert(name.as_str()) {
                out.push(Violation::DuplicateCandidate { name: name.clone() });
            }
        }
        out
    }
}

/// A complete strict ranking: position `p` holds the candidate ranked `p + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceOrder(Vec<usize>);

impl PreferenceOrder {
    /// Checks that `ranking` is a permutation of `0..m`.
    pub fn new(ranking: Vec<usize>, m: usize) -> Result<Self, ProfileError> {
        let order = Self(ranking);
        if order.is_permutation_of(m) {
            Ok(order)
        } else {
            Err(ProfileError::Invalid(vec![Violation::NotAPermutation {
                group: 0,
                ranking: order.0,
            }]))
        }
    }

    pub fn new_unchecked(ranking: Vec<usize>) -> Self {
        Self(ranking)
    }

    pub fn ranking(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// 1-based rank of `candidate`, or `None` if it does not appear.
    pub fn rank_of(&self, candidate: usize) -> Option<usize> {
        self.0.iter().position(|&c| c == candidate).map(|p| p + 1)
    }

    pub fn is_permutation_of(&self, m: usize) -> bool {
        if self.0.len() != m {
            return false;
        }
        let mut seen = vec![false; m];
        for &c in &self.0 {
            if c >= m || seen[c] {
                return false;
            }
            seen[c] = true;
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BallotGroup {
    pub order: PreferenceOrder,
    pub count: u64,
}

impl BallotGroup {
    pub fn new(order: PreferenceOrder, count: u64) -> Self {
        Self { order, count }
    }
}

/// One broken invariant of a [`VoteProfile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoCandidates,
    EmptyCandidateName { index: usize },
    DuplicateCandidate { name: String },
    NotAPermutation { group: usize, ranking: Vec<usize> },
    DuplicateOrder { first: usize, second: usize },
    CountMismatch { declared: u64, counted: u64 },
    NoVoters,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoCandidates => write!(f, "candidate set is empty"),
            Violation::EmptyCandidateName { index } => {
                write!(f, "candidate #{index} has an empty name")
            }
            Violation::DuplicateCandidate { name } => {
                write!(f, "candidate {name:?} is listed more than once")
            }
            Violation::NotAPermutation { group, ranking } => write!(
                f,
                "ballot group #{group} order {ranking:?} is not a permutation of the candidates"
            ),
            Violation::DuplicateOrder { first, second } => write!(
                f,
                "ballot groups #{first} and #{second} carry the same order"
            ),
            Violation::CountMismatch { declared, counted } => write!(
                f,
                "voter count mismatch: declared {declared}, ballot counts sum to {counted}"
            ),
            Violation::NoVoters => write!(f, "profile has no voters"),
        }
    }
}

/// The full preference profile: candidates plus grouped ballots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoteProfile {
    candidates: CandidateSet,
    groups: Vec<BallotGroup>,
    n_voters: u64,
}

impl VoteProfile {
    /// Normalizes and validates: zero-count groups are dropped, identical
    /// orders are merged, and `n_voters` is the total count.
    pub fn new(candidates: CandidateSet, groups: Vec<BallotGroup>) -> Result<Self, ProfileError> {
        let m = candidates.len();
        let mut merged: Vec<BallotGroup> = Vec::with_capacity(groups.len());
        let mut index: BTreeMap<PreferenceOrder, usize> = BTreeMap::new();
        let mut bad = Vec::new();
        for (i, g) in groups.into_iter().enumerate() {
            if !g.order.is_permutation_of(m) {
                bad.push(Violation::NotAPermutation {
                    group: i,
                    ranking: g.order.0.clone(),
                });
                continue;
            }
            if g.count == 0 {
                continue;
            }
            match index.get(&g.order) {
                Some(&slot) => merged[slot].count += g.count,
                None => {
                    index.insert(g.order.clone(), merged.len());
                    merged.push(g);
                }
            }
        }
        let n_voters = merged.iter().map(|g| g.count).sum();
        let profile = Self {
            candidates,
            groups: merged,
            n_voters,
        };
        bad.extend(validate_profile(&profile));
        if bad.is_empty() {
            Ok(profile)
        } else {
            Err(ProfileError::Invalid(bad))
        }
    }

    /// Builds a profile exactly as given. Nothing is merged or checked.
    pub fn from_parts_unchecked(
        candidates: CandidateSet,
        groups: Vec<BallotGroup>,
        n_voters: u64,
    ) -> Self {
        Self {
            candidates,
            groups,
            n_voters,
        }
    }

    /// Convenience constructor from `(ranking, count)` pairs over indices.
    pub fn from_rankings<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        rankings: impl IntoIterator<Item = (Vec<usize>, u64)>,
    ) -> Result<Self, ProfileError> {
        let candidates = CandidateSet::new(names)?;
        let groups = rankings
            .into_iter()
            .map(|(r, c)| BallotGroup::new(PreferenceOrder::new_unchecked(r), c))
            .collect();
        Self::new(candidates, groups)
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn groups(&self) -> &[BallotGroup] {
        &self.groups
    }

    /// Number of voters, `N`.
    pub fn n_voters(&self) -> u64 {
        self.n_voters
    }

    /// Number of candidates, `m`.
    pub fn n_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidate_name(&self, index: usize) -> &str {
        &self.candidates.names[index]
    }

    /// Renames candidates: candidate `i` becomes candidate `perm[i]`, keeping
    /// its name. The result describes the same election under new indices.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, ProfileError> {
        let m = self.n_candidates();
        if !PreferenceOrder::new_unchecked(perm.to_vec()).is_permutation_of(m) {
            return Err(ProfileError::Invalid(vec![Violation::NotAPermutation {
                group: 0,
                ranking: perm.to_vec(),
            }]));
        }
        let mut names = vec![String::new(); m];
        for (old, &new) in perm.iter().enumerate() {
            names[new] = self.candidates.names[old].clone();
        }
        let groups = self
            .groups
            .iter()
            .map(|g| {
                let r = g.order.0.iter().map(|&c| perm[c]).collect();
                BallotGroup::new(PreferenceOrder(r), g.count)
            })
            .collect();
        Self::new(CandidateSet { names }, groups)
    }
}

/// Lists every invariant violation of `p`; empty iff the profile is valid.
pub fn validate_profile(p: &VoteProfile) -> Vec<Violation> {
    let mut out = p.candidates.violations();
    let m = p.candidates.len();
    let mut seen: BTreeMap<&PreferenceOrder, usize> = BTreeMap::new();
    for (i, g) in p.groups.iter().enumerate() {
        if !g.order.is_permutation_of(m) {
            out.push(Violation::NotAPermutation {
                group: i,
                ranking: g.order.0.clone(),
            });
        }
        if let Some(&first) = seen.get(&g.order) {
            out.push(Violation::DuplicateOrder { first, second: i });
        } else {
            seen.insert(&g.order, i);
        }
    }
    let counted: u64 = p.groups.iter().map(|g| g.count).sum();
    if counted != p.n_voters {
        out.push(Violation::CountMismatch {
            declared: p.n_voters,
            counted,
        });
    }
    if p.n_voters == 0 {
        out.push(Violation::NoVoters);
    }
    out
}

/// Wire form of a profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub candidates: Vec<String>,
    pub ballots: Vec<BallotDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallotDocument {
    pub order: Vec<String>,
    pub count: u64,
}

impl ProfileDocument {
    pub fn into_profile(self) -> Result<VoteProfile, ProfileError> {
        let candidates = CandidateSet::new_unchecked(self.candidates);
        let names = candidates.violations();
        if !names.is_empty() {
            return Err(ProfileError::Invalid(names));
        }
        let mut groups = Vec::with_capacity(self.ballots.len());
        for (i, b) in self.ballots.into_iter().enumerate() {
            let mut ranking = Vec::with_capacity(b.order.len());
            for name in &b.order {
                let idx =
                    candidates
                        .index_of(name)
                        .ok_or_else(|| ProfileError::UnknownCandidate {
                            group: i,
                            name: name.clone(),
                        })?;
                ranking.push(idx);
            }
            groups.push(BallotGroup::new(PreferenceOrder(ranking), b.count));
        }
        VoteProfile::new(candidates, groups)
    }
}

impl From<&VoteProfile> for ProfileDocument {
    fn from(p: &VoteProfile) -> Self {
        Self {
            candidates: p.candidates.names.clone(),
            ballots: p
                .groups
                .iter()
                .map(|g| BallotDocument {
                    order: g
                        .order
                        .0
                        .iter()
                        .map(|&c| p.candidates.names[c].clone())
                        .collect(),
                    count: g.count,
                })
                .collect(),
        }
    }
}

/// Parses a JSON profile document into a validated profile.
pub fn parse_profile(text: &str) -> Result<VoteProfile, ProfileError> {
    let doc: ProfileDocument = serde_json::from_str(text)?;
    doc.into_profile()
}

/// Canonical JSON serialization of a profile.
pub fn serialize_profile(p: &VoteProfile) -> String {
    serde_json::to_string_pretty(&ProfileDocument::from(p)).expect("profile document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(ballots: &[(&str, u64)]) -> String {
        let ballots: Vec<String> = ballots
            .iter()
            .map(|(o, c)| {
                let names: Vec<String> = o.split('>').map(|s| format!("{s:?}")).collect();
                format!(r#"{{"order": [{}], "count": {c}}}"#, names.join(","))
            })
            .collect();
        format!(
            r#"{{"candidates": ["A","B","C"], "ballots": [{}]}}"#,
            ballots.join(",")
        )
    }

    #[test]
    fn unanimous_document() {
        let p = parse_profile(&doc(&[("A>B>C", 5)])).unwrap();
        assert_eq!(p.n_candidates(), 3);
        assert_eq!(p.n_voters(), 5);
        assert_eq!(p.groups().len(), 1);
    }

    #[test]
    fn identical_orders_merge() {
        let p = parse_profile(&doc(&[("A>B>C", 2), ("A>B>C", 3)])).unwrap();
        assert_eq!(p.groups().len(), 1);
        assert_eq!(p.groups()[0].count, 5);
        assert_eq!(p.n_voters(), 5);
    }

    #[test]
    fn six_group_instance() {
        let text = doc(&[
            ("A>B>C", 6),
            ("A>C>B", 4),
            ("B>A>C", 4),
            ("B>C>A", 7),
            ("C>A>B", 4),
            ("C>B>A", 4),
        ]);
        let p = parse_profile(&text).unwrap();
        assert_eq!(p.n_voters(), 29);
        assert_eq!(p.groups().len(), 6);
        assert!(validate_profile(&p).is_empty());
    }

    #[test]
    fn zero_count_groups_are_dropped() {
        let p = parse_profile(&doc(&[("A>B>C", 3), ("C>B>A", 0)])).unwrap();
        assert_eq!(p.groups().len(), 1);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(
            parse_profile("{\"candidates\": [\"A\"]"),
            Err(ProfileError::Json(_))
        ));
        assert!(matches!(
            parse_profile(&doc(&[("A>B>D", 1)])),
            Err(ProfileError::UnknownCandidate { .. })
        ));
        assert!(matches!(
            parse_profile(&doc(&[("A>B>A", 1)])),
            Err(ProfileError::Invalid(_))
        ));
        assert!(matches!(
            parse_profile(&doc(&[("A>B", 1)])),
            Err(ProfileError::Invalid(_))
        ));
        assert!(matches!(
            parse_profile(&doc(&[("A>B>C", 0)])),
            Err(ProfileError::Invalid(v)) if v == vec![Violation::NoVoters]
        ));
        assert!(parse_profile(
            r#"{"candidates": ["A","A"], "ballots": [{"order": ["A","A"], "count": 1}]}"#
        )
        .is_err());
        assert!(parse_profile(r#"{"candidates": [], "ballots": []}"#).is_err());
    }

    #[test]
    fn count_mismatch_is_reported() {
        let good = parse_profile(&doc(&[("A>B>C", 29)])).unwrap();
        let bad = VoteProfile::from_parts_unchecked(
            good.candidates().clone(),
            good.groups().to_vec(),
            30,
        );
        let v = validate_profile(&bad);
        assert_eq!(
            v,
            vec![Violation::CountMismatch {
                declared: 30,
                counted: 29
            }]
        );
        assert!(v[0].to_string().contains("mismatch"));
    }

    #[test]
    fn repeated_candidate_in_order_is_reported() {
        let cands = CandidateSet::new(["A", "B", "C"]).unwrap();
        let bad = VoteProfile::from_parts_unchecked(
            cands,
            vec![BallotGroup::new(
                PreferenceOrder::new_unchecked(vec![0, 1, 0]),
                4,
            )],
            4,
        );
        let v = validate_profile(&bad);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::NotAPermutation { group: 0, .. }));
    }

    #[test]
    fn rank_lookup() {
        let o = PreferenceOrder::new(vec![2, 0, 1], 3).unwrap();
        assert_eq!(o.rank_of(2), Some(1));
        assert_eq!(o.rank_of(1), Some(3));
        assert_eq!(o.rank_of(7), None);
        assert!(PreferenceOrder::new(vec![0, 0, 1], 3).is_err());
    }
}
