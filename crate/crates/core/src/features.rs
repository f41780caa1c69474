//! Per-candidate feature values for the six voting criteria.
//!
//! Every value is an exact rational. Counts are integers; only the
//! head-to-head record can be a half-integer (a pairwise draw is worth 1/2).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::FeatureError;
use crate::profile::VoteProfile;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Maximize,
    Minimize,
}

impl Polarity {
    /// `true` when `a` is strictly better than `b`.
    pub fn better(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Polarity::Maximize => a > b,
            Polarity::Minimize => a < b,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Maximize => "max",
            Polarity::Minimize => "min",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureKind {
    #[serde(rename = "P")]
    Plurality,
    #[serde(rename = "BR")]
    Bucklin,
    #[serde(rename = "B")]
    Borda,
    #[serde(rename = "H")]
    HeadToHead,
    #[serde(rename = "L")]
    LastPlace,
    #[serde(rename = "M")]
    Gpo,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 6] = [
        FeatureKind::Plurality,
        FeatureKind::Bucklin,
        FeatureKind::Borda,
        FeatureKind::HeadToHead,
        FeatureKind::LastPlace,
        FeatureKind::Gpo,
    ];

    pub fn polarity(self) -> Polarity {
        match self {
            FeatureKind::LastPlace | FeatureKind::Gpo => Polarity::Minimize,
            _ => Polarity::Maximize,
        }
    }

    pub fn short_code(self) -> &'static str {
        match self {
            FeatureKind::Plurality => "P",
            FeatureKind::Bucklin => "BR",
            FeatureKind::Borda => "B",
            FeatureKind::HeadToHead => "H",
            FeatureKind::LastPlace => "L",
            FeatureKind::Gpo => "M",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.short_code() == code)
    }

    pub fn label(self) -> &'static str {
        match self {
            FeatureKind::Plurality => "first-place votes",
            FeatureKind::Bucklin => "Bucklin score",
            FeatureKind::Borda => "Borda count",
            FeatureKind::HeadToHead => "head-to-head record",
            FeatureKind::LastPlace => "last-place votes",
            FeatureKind::Gpo => "greatest pairwise opposition",
        }
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_code())
    }
}

impl FromStr for FeatureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_code(s).ok_or_else(|| format!("unknown feature code {s:?}"))
    }
}

/// `wins[x][y]` is the number of voters ranking `x` above `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseMatrix {
    wins: Vec<Vec<u64>>,
}

impl PairwiseMatrix {
    pub fn wins(&self, x: usize, y: usize) -> u64 {
        self.wins[x][y]
    }

    pub fn size(&self) -> usize {
        self.wins.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.wins
    }
}

/// Raw values of one feature for every candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureVector {
    pub feature: FeatureKind,
    pub values: Vec<Rational>,
    /// Largest magnitude the feature can reach on this profile.
    pub norm_constant: Rational,
}

impl FeatureVector {
    pub fn new(feature: FeatureKind, values: Vec<Rational>, norm_constant: Rational) -> Self {
        Self {
            feature,
            values,
            norm_constant,
        }
    }

    pub fn polarity(&self) -> Polarity {
        self.feature.polarity()
    }

    /// Candidates with the best value under the feature's polarity.
    pub fn best(&self) -> BTreeSet<usize> {
        let pol = self.polarity();
        let Some(top) = self
            .values
            .iter()
            .copied()
            .reduce(|a, b| if pol.better(&b, &a) { b } else { a })
        else {
            return BTreeSet::new();
        };
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == top)
            .map(|(i, _)| i)
            .collect()
    }

    /// Multiplies values and normalization constant by `factor`.
    pub fn scaled(&self, factor: Rational) -> Self {
        Self {
            feature: self.feature,
            values: self.values.iter().map(|v| v * factor).collect(),
            norm_constant: self.norm_constant * factor,
        }
    }
}

fn int(n: u64) -> Rational {
    Rational::from_integer(n as i64)
}

pub fn pairwise_matrix(p: &VoteProfile) -> PairwiseMatrix {
    let m = p.n_candidates();
    let mut wins = vec![vec![0u64; m]; m];
    for g in p.groups() {
        let r = g.order.ranking();
        for (i, &hi) in r.iter().enumerate() {
            for &lo in &r[i + 1..] {
                wins[hi][lo] += g.count;
            }
        }
    }
    PairwiseMatrix { wins }
}

pub fn first_place_votes(p: &VoteProfile) -> FeatureVector {
    let mut counts = vec![0u64; p.n_candidates()];
    for g in p.groups() {
        counts[g.order.first()] += g.count;
    }
    FeatureVector::new(
        FeatureKind::Plurality,
        counts.into_iter().map(int).collect(),
        int(p.n_voters()),
    )
}

pub fn last_place_votes(p: &VoteProfile) -> FeatureVector {
    let mut counts = vec![0u64; p.n_candidates()];
    for g in p.groups() {
        counts[g.order.last()] += g.count;
    }
    FeatureVector::new(
        FeatureKind::LastPlace,
        counts.into_iter().map(int).collect(),
        int(p.n_voters()),
    )
}

/// Rank `r` (1-based) earns `m - r` points.
pub fn borda_count(p: &VoteProfile) -> Result<FeatureVector, FeatureError> {
    let m = p.n_candidates();
    if m < 2 {
        return Err(FeatureError::Inapplicable(FeatureKind::Borda));
    }
    let mut points = vec![0u64; m];
    for g in p.groups() {
        for (pos, &c) in g.order.ranking().iter().enumerate() {
            points[c] += g.count * (m - 1 - pos) as u64;
        }
    }
    Ok(FeatureVector::new(
        FeatureKind::Borda,
        points.into_iter().map(int).collect(),
        int(p.n_voters() * (m as u64 - 1)),
    ))
}

fn cumulative_top(p: &VoteProfile, depth: usize) -> Vec<u64> {
    let mut cum = vec![0u64; p.n_candidates()];
    for g in p.groups() {
        for &c in &g.order.ranking()[..depth] {
            cum[c] += g.count;
        }
    }
    cum
}

/// Smallest depth `k` at which some candidate is ranked within the top `k`
/// by a strict majority.
pub fn bucklin_stopping_level(p: &VoteProfile) -> usize {
    let n = p.n_voters();
    (1..=p.n_candidates())
        .find(|&k| cumulative_top(p, k).iter().any(|&c| 2 * c > n))
        .unwrap_or(p.n_candidates())
}

/// Every candidate is measured at the shared stopping level.
pub fn bucklin_scores(p: &VoteProfile) -> FeatureVector {
    let level = bucklin_stopping_level(p);
    FeatureVector::new(
        FeatureKind::Bucklin,
        cumulative_top(p, level).into_iter().map(int).collect(),
        int(p.n_voters()),
    )
}

/// Copeland score: one point per pairwise win, half a point per draw.
pub fn head_to_head_record(p: &VoteProfile) -> Result<FeatureVector, FeatureError> {
    let m = p.n_candidates();
    if m < 2 {
        return Err(FeatureError::Inapplicable(FeatureKind::HeadToHead));
    }
    let pw = pairwise_matrix(p);
    let half = Rational::new(1, 2);
    let values = (0..m)
        .map(|x| {
            (0..m)
                .filter(|&y| y != x)
                .map(|y| match pw.wins(x, y).cmp(&pw.wins(y, x)) {
                    std::cmp::Ordering::Greater => Rational::from_integer(1),
                    std::cmp::Ordering::Equal => half,
                    std::cmp::Ordering::Less => Rational::zero(),
                })
                .sum()
        })
        .collect();
    Ok(FeatureVector::new(
        FeatureKind::HeadToHead,
        values,
        Rational::from_integer(m as i64 - 1),
    ))
}

/// Largest number of voters preferring some single opponent to each candidate.
pub fn greatest_pairwise_opposition(p: &VoteProfile) -> Result<FeatureVector, FeatureError> {
    let m = p.n_candidates();
    if m < 2 {
        return Err(FeatureError::Inapplicable(FeatureKind::Gpo));
    }
    let pw = pairwise_matrix(p);
    let values = (0..m)
        .map(|x| {
            let worst = (0..m)
                .filter(|&y| y != x)
                .map(|y| pw.wins(y, x))
                .max()
                .unwrap_or(0);
            int(worst)
        })
        .collect();
    Ok(FeatureVector::new(
        FeatureKind::Gpo,
        values,
        int(p.n_voters()),
    ))
}

pub fn compute_feature(p: &VoteProfile, kind: FeatureKind) -> Result<FeatureVector, FeatureError> {
    match kind {
        FeatureKind::Plurality => Ok(first_place_votes(p)),
        FeatureKind::Bucklin => Ok(bucklin_scores(p)),
        FeatureKind::Borda => borda_count(p),
        FeatureKind::HeadToHead => head_to_head_record(p),
        FeatureKind::LastPlace => Ok(last_place_votes(p)),
        FeatureKind::Gpo => greatest_pairwise_opposition(p),
    }
}

/// All applicable features, in canonical order.
pub fn all_features(p: &VoteProfile) -> Vec<FeatureVector> {
    FeatureKind::ALL
        .into_iter()
        .filter_map(|k| compute_feature(p, k).ok())
        .collect()
}

/// Winners of the single-feature rule; a set because ties are possible.
pub fn winner_by_feature(
    p: &VoteProfile,
    kind: FeatureKind,
) -> Result<BTreeSet<usize>, FeatureError> {
    Ok(compute_feature(p, kind)?.best())
}
