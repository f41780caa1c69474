//! Picking feature-based explanations for a designated winner.
//!
//! The pipeline is: drop every feature on which some opponent is strictly
//! better than the winner, score each survivor by the winner's total lead
//! over all opponents, normalize by the feature's maximum magnitude, sort
//! descending, shuffle exact ties with a seeded draw, and keep the top `n`.

use std::collections::BTreeSet;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::EngineError;
use crate::features::{self, FeatureKind, FeatureVector};
use crate::profile::VoteProfile;
use crate::Rational;

/// Default number of explanations presented.
pub const DEFAULT_N: usize = 3;

/// How an opponent's equal value is treated by the dominance filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FilterSemantics {
    /// A feature is dropped only when some opponent is strictly better.
    Weak,
    /// A feature is dropped unless the winner is strictly better than everyone.
    Strict,
}

impl FilterSemantics {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterSemantics::Weak => "weak",
            FilterSemantics::Strict => "strict",
        }
    }
}

/// A surviving feature with its dominance score.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoredFeature {
    pub feature: FeatureKind,
    /// Sum of absolute differences between the winner and every opponent.
    pub raw_score: Rational,
    /// `raw_score / norm_constant`.
    pub normalized_score: Rational,
    /// 1-based position after sorting; 0 until ranked.
    pub rank: usize,
    /// Other survivors with exactly the same normalized score.
    pub tied_with: BTreeSet<FeatureKind>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub winner_value: Rational,
    /// Best value among opponents; `None` with a single candidate.
    pub best_opponent_value: Option<Rational>,
    pub n_voters: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explanation {
    pub feature: FeatureKind,
    pub scored: ScoredFeature,
    pub text: String,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplanationSet {
    pub winner: usize,
    pub requested_n: usize,
    pub seed: u64,
    /// Whether `items` was extended through a tie spanning the cutoff.
    pub audit: bool,
    pub items: Vec<Explanation>,
    /// Every survivor, ranked, before truncation.
    pub surviving_features: Vec<ScoredFeature>,
}

impl ExplanationSet {
    /// `true` when the winner is strictly beaten on every feature.
    pub fn is_dominated(&self) -> bool {
        self.surviving_features.is_empty()
    }

    pub fn feature_codes(&self) -> Vec<&'static str> {
        self.items.iter().map(|e| e.feature.short_code()).collect()
    }

    pub fn features(&self) -> BTreeSet<FeatureKind> {
        self.items.iter().map(|e| e.feature).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExplainOptions {
    pub n: usize,
    pub seed: u64,
    pub audit: bool,
}

impl Default for ExplainOptions {
    fn default() -> Self {
        Self {
            n: DEFAULT_N,
            seed: 0,
            audit: false,
        }
    }
}

fn check_winner(p: &VoteProfile, winner: usize) -> Result<(), EngineError> {
    let m = p.n_candidates();
    if winner >= m {
        return Err(EngineError::UnknownWinner { index: winner, m });
    }
    Ok(())
}

/// Whether `winner` is undominated on `v` under the given semantics.
pub fn survives(v: &FeatureVector, winner: usize, semantics: FilterSemantics) -> bool {
    let pol = v.polarity();
    let mine = &v.values[winner];
    v.values
        .iter()
        .enumerate()
        .filter(|&(t, _)| t != winner)
        .all(|(_, theirs)| match semantics {
            FilterSemantics::Weak => !pol.better(theirs, mine),
            FilterSemantics::Strict => pol.better(mine, theirs),
        })
}

/// Features on which no opponent is strictly better than `winner`.
pub fn filter_features(
    p: &VoteProfile,
    winner: usize,
    features: &[FeatureKind],
) -> Result<BTreeSet<FeatureKind>, EngineError> {
    filter_features_with(p, winner, features, FilterSemantics::Weak)
}

/// Inapplicable features (single candidate) are silently dropped.
pub fn filter_features_with(
    p: &VoteProfile,
    winner: usize,
    features: &[FeatureKind],
    semantics: FilterSemantics,
) -> Result<BTreeSet<FeatureKind>, EngineError> {
    check_winner(p, winner)?;
    Ok(features
        .iter()
        .filter_map(|&k| features::compute_feature(p, k).ok())
        .filter(|v| survives(v, winner, semantics))
        .map(|v| v.feature)
        .collect())
}

/// Scores a feature vector for `winner`, which must be undominated on it.
pub fn score_vector(v: &FeatureVector, winner: usize) -> Result<ScoredFeature, EngineError> {
    if !survives(v, winner, FilterSemantics::Weak) {
        return Err(EngineError::Dominated(v.feature));
    }
    let mine = v.values[winner];
    let raw_score: Rational = v
        .values
        .iter()
        .enumerate()
        .filter(|&(t, _)| t != winner)
        .map(|(_, theirs)| (mine - theirs).abs())
        .sum();
    Ok(ScoredFeature {
        feature: v.feature,
        raw_score,
        normalized_score: raw_score / v.norm_constant,
        rank: 0,
        tied_with: BTreeSet::new(),
    })
}

pub fn score_feature(
    p: &VoteProfile,
    winner: usize,
    feature: FeatureKind,
) -> Result<ScoredFeature, EngineError> {
    check_winner(p, winner)?;
    score_vector(&features::compute_feature(p, feature)?, winner)
}

fn tie_group_seed(seed: u64, group: &[FeatureKind]) -> u64 {
    // FNV-1a over the group's codes, folded into the caller's seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for k in group {
        for b in k.short_code().bytes().chain(std::iter::once(b'/')) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    seed ^ h
}

/// Sorts by normalized score (descending), shuffles each exact-tie group
/// with a draw that depends only on `seed` and the group's members, and
/// assigns ranks and tie sets.
pub fn rank_scored(mut scored: Vec<ScoredFeature>, seed: u64) -> Vec<ScoredFeature> {
    scored.sort_by(|a, b| {
        b.normalized_score
            .cmp(&a.normalized_score)
            .then(a.feature.cmp(&b.feature))
    });
    let mut start = 0;
    while start < scored.len() {
        let score = scored[start].normalized_score;
        let end = start
            + scored[start..]
                .iter()
                .take_while(|s| s.normalized_score == score)
                .count();
        let group = &mut scored[start..end];
        if group.len() > 1 {
            let kinds: Vec<FeatureKind> = group.iter().map(|s| s.feature).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(tie_group_seed(seed, &kinds));
            group.shuffle(&mut rng);
        }
        let kinds: BTreeSet<FeatureKind> = group.iter().map(|s| s.feature).collect();
        for s in group.iter_mut() {
            s.tied_with = kinds.iter().copied().filter(|&k| k != s.feature).collect();
        }
        start = end;
    }
    for (i, s) in scored.iter_mut().enumerate() {
        s.rank = i + 1;
    }
    scored
}

fn sentence(p: &VoteProfile, winner: usize, s: &ScoredFeature, d: Rational) -> String {
    let w = p.candidate_name(winner);
    let n = p.n_voters();
    let m = p.n_candidates();
    match s.feature {
        FeatureKind::Plurality => {
            format!("{w} received the most first-choice votes ({d} of {n} voters).")
        }
        FeatureKind::Bucklin => {
            let depth = features::bucklin_stopping_level(p);
            format!(
                "{w} has the highest Bucklin score: {d} of {n} voters rank {w} within their top {depth} choices, \
                 the first depth at which a candidate reaches a majority."
            )
        }
        FeatureKind::Borda => format!(
            "{w} has the highest Borda count ({d} points out of a possible {} from {n} voters).",
            n * (m as u64 - 1)
        ),
        FeatureKind::HeadToHead if d == Rational::from_integer(m as i64 - 1) => format!(
            "{w} beats every other candidate head-to-head ({d} of {} pairwise contests won across {n} voters).",
            m - 1
        ),
        FeatureKind::HeadToHead => format!(
            "{w} has the best head-to-head record ({d} of {} pairwise contests won across {n} voters).",
            m - 1
        ),
        FeatureKind::LastPlace => {
            format!("{w} was ranked last by the fewest voters ({d} of {n}).")
        }
        FeatureKind::Gpo => format!(
            "{w} faces the smallest greatest pairwise opposition: no opponent is preferred to {w} by more than {d} of {n} voters."
        ),
    }
}

/// Renders the sentence and evidence for one scored feature.
pub fn render_explanation(s: &ScoredFeature, p: &VoteProfile, winner: usize) -> Explanation {
    let v = features::compute_feature(p, s.feature)
        .expect("scored features are applicable to their profile");
    let d = v.values[winner];
    let pol = v.polarity();
    let best_opponent_value = v
        .values
        .iter()
        .enumerate()
        .filter(|&(t, _)| t != winner)
        .map(|(_, x)| *x)
        .reduce(|a, b| if pol.better(&b, &a) { b } else { a });
    Explanation {
        feature: s.feature,
        scored: s.clone(),
        text: sentence(p, winner, s, d),
        evidence: Evidence {
            winner_value: d,
            best_opponent_value,
            n_voters: p.n_voters(),
        },
    }
}

/// Ranked, scored survivors for `winner` over every applicable feature.
pub fn ranked_survivors(
    p: &VoteProfile,
    winner: usize,
    seed: u64,
) -> Result<Vec<ScoredFeature>, EngineError> {
    ranked_survivors_with(p, winner, seed, FilterSemantics::Weak)
}

pub fn ranked_survivors_with(
    p: &VoteProfile,
    winner: usize,
    seed: u64,
    semantics: FilterSemantics,
) -> Result<Vec<ScoredFeature>, EngineError> {
    check_winner(p, winner)?;
    let scored = features::all_features(p)
        .iter()
        .filter(|v| survives(v, winner, semantics))
        .map(|v| score_vector(v, winner))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rank_scored(scored, seed))
}

/// Number of ranked items to keep: `n`, or more in audit mode when the
/// item at the cutoff is tied with items below it.
fn cutoff(ranked: &[ScoredFeature], n: usize, audit: bool) -> usize {
    if ranked.len() <= n {
        return ranked.len();
    }
    if !audit {
        return n;
    }
    let last = ranked[n - 1].normalized_score;
    n + ranked[n..]
        .iter()
        .take_while(|s| s.normalized_score == last)
        .count()
}

pub fn select_explanations(
    p: &VoteProfile,
    winner: usize,
    n: usize,
    seed: u64,
) -> Result<ExplanationSet, EngineError> {
    explain(
        p,
        winner,
        &ExplainOptions {
            n,
            seed,
            audit: false,
        },
    )
}

/// Runs the whole pipeline for `winner`.
///
/// A winner that is strictly beaten on every feature yields an empty set
/// for which [`ExplanationSet::is_dominated`] is `true`.
pub fn explain(
    p: &VoteProfile,
    winner: usize,
    opts: &ExplainOptions,
) -> Result<ExplanationSet, EngineError> {
    explain_with(p, winner, opts, FilterSemantics::Weak)
}

/// [`explain`] under an explicit filter reading.
pub fn explain_with(
    p: &VoteProfile,
    winner: usize,
    opts: &ExplainOptions,
    semantics: FilterSemantics,
) -> Result<ExplanationSet, EngineError> {
    if opts.n == 0 {
        return Err(EngineError::ZeroExplanations);
    }
    let ranked = ranked_survivors_with(p, winner, opts.seed, semantics)?;
    let keep = cutoff(&ranked, opts.n, opts.audit);
    let items = ranked[..keep]
        .iter()
        .map(|s| render_explanation(s, p, winner))
        .collect();
    Ok(ExplanationSet {
        winner,
        requested_n: opts.n,
        seed: opts.seed,
        audit: opts.audit,
        items,
        surviving_features: ranked,
    })
}

/// [`explain`] with the winner given by name.
pub fn explain_named(
    p: &VoteProfile,
    winner: &str,
    opts: &ExplainOptions,
) -> Result<ExplanationSet, EngineError> {
    let idx = p
        .candidates()
        .index_of(winner)
        .ok_or_else(|| EngineError::UnknownWinnerName(winner.to_string()))?;
    explain(p, idx, opts)
}
