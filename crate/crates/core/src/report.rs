//! Serializable reports for feature tables and explanation sets.
//!
//! Rationals are rendered as `"p/q"`, or as a bare integer when the
//! denominator is one.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engine::{ExplanationSet, ScoredFeature};
use crate::features::{self, FeatureVector};
use crate::profile::VoteProfile;
use crate::Rational;

pub fn rational_str(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (i64, i64) = (n.parse().ok()?, d.parse().ok()?);
            (d != 0).then(|| Rational::new(n, d))
        }
        None => s.parse().ok().map(Rational::from_integer),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub short_code: String,
    pub polarity: String,
    pub values: Vec<String>,
    pub norm_constant: String,
}

impl From<&FeatureVector> for FeatureRow {
    fn from(v: &FeatureVector) -> Self {
        Self {
            short_code: v.feature.short_code().to_string(),
            polarity: v.polarity().as_str().to_string(),
            values: v.values.iter().map(rational_str).collect(),
            norm_constant: rational_str(&v.norm_constant),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub candidates: Vec<String>,
    pub n_voters: u64,
    pub features: Vec<FeatureRow>,
}

impl FeatureReport {
    pub fn new(p: &VoteProfile) -> Self {
        Self {
            candidates: p.candidates().names().to_vec(),
            n_voters: p.n_voters(),
            features: features::all_features(p)
                .iter()
                .map(FeatureRow::from)
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .candidates
            .iter()
            .map(String::len)
            .chain(
                self.features
                    .iter()
                    .flat_map(|f| f.values.iter().map(String::len)),
            )
            .max()
            .unwrap_or(1)
            .max(4);
        let _ = write!(out, "{:<8}{:<5}", "feature", "pol");
        for c in &self.candidates {
            let _ = write!(out, " {c:>width$}");
        }
        let _ = writeln!(out, " {:>width$}", "norm");
        for row in &self.features {
            let _ = write!(out, "{:<8}{:<5}", row.short_code, row.polarity);
            for v in &row.values {
                let _ = write!(out, " {v:>width$}");
            }
            let _ = writeln!(out, " {:>width$}", row.norm_constant);
        }
        let _ = writeln!(out, "voters: {}", self.n_voters);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub feature_code: String,
    pub raw_score: String,
    pub normalized_score: String,
    pub rank: usize,
    pub tied_with: Vec<String>,
}

impl From<&ScoredFeature> for ScoreEntry {
    fn from(s: &ScoredFeature) -> Self {
        Self {
            feature_code: s.feature.short_code().to_string(),
            raw_score: rational_str(&s.raw_score),
            normalized_score: rational_str(&s.normalized_score),
            rank: s.rank,
            tied_with: s
                .tied_with
                .iter()
                .map(|k| k.short_code().to_string())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemEntry {
    pub feature_code: String,
    pub raw_score: String,
    pub normalized_score: String,
    pub rank: usize,
    pub tied_with: Vec<String>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationReport {
    pub winner: String,
    pub requested_n: usize,
    pub seed: u64,
    /// Set when the winner survives no feature at all.
    pub dominated: bool,
    pub items: Vec<ItemEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surviving_features: Option<Vec<ScoreEntry>>,
}

impl ExplanationReport {
    pub fn new(set: &ExplanationSet, p: &VoteProfile) -> Self {
        Self {
            winner: p.candidate_name(set.winner).to_string(),
            requested_n: set.requested_n,
            seed: set.seed,
            dominated: set.is_dominated(),
            items: set
                .items
                .iter()
                .map(|e| {
                    let s = ScoreEntry::from(&e.scored);
                    ItemEntry {
                        feature_code: s.feature_code,
                        raw_score: s.raw_score,
                        normalized_score: s.normalized_score,
                        rank: s.rank,
                        tied_with: s.tied_with,
                        text: e.text.clone(),
                    }
                })
                .collect(),
            surviving_features: set.audit.then(|| {
                set.surviving_features
                    .iter()
                    .map(ScoreEntry::from)
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "winner: {} (n={}, seed={})",
            self.winner, self.requested_n, self.seed
        );
        if self.dominated {
            let _ = writeln!(
                out,
                "no explanation: {} is strictly beaten on every feature",
                self.winner
            );
            return out;
        }
        for it in &self.items {
            let _ = write!(
                out,
                "{}. [{}] score {} (raw {})",
                it.rank, it.feature_code, it.normalized_score, it.raw_score
            );
            if !it.tied_with.is_empty() {
                let _ = write!(out, " tied with {}", it.tied_with.join(","));
            }
            let _ = writeln!(out, ": {}", it.text);
        }
        if let Some(all) = &self.surviving_features {
            let _ = writeln!(out, "surviving features:");
            for s in all {
                let _ = writeln!(
                    out,
                    "  {}. [{}] score {} (raw {})",
                    s.rank, s.feature_code, s.normalized_score, s.raw_score
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{explain, ExplainOptions};

    #[test]
    fn rational_rendering() {
        assert_eq!(rational_str(&Rational::new(3, 2)), "3/2");
        assert_eq!(rational_str(&Rational::new(10, 5)), "2");
        assert_eq!(rational_str(&Rational::from_integer(0)), "0");
        assert_eq!(parse_rational("3/2"), Some(Rational::new(3, 2)));
        assert_eq!(parse_rational("7"), Some(Rational::from_integer(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn feature_table_text() {
        let p = VoteProfile::from_rankings(
            ["A", "B", "C"],
            [(vec![0, 1, 2], 2), (vec![1, 2, 0], 1), (vec![2, 1, 0], 2)],
        )
        .unwrap();
        let rep = FeatureReport::new(&p);
        let borda = rep.features.iter().find(|f| f.short_code == "B").unwrap();
        assert_eq!(borda.values, ["4", "6", "5"]);
        assert_eq!(borda.norm_constant, "10");
        let text = rep.to_text();
        assert!(
            text.lines()
                .any(|l| l.split_whitespace().collect::<Vec<_>>()
                    == ["B", "max", "4", "6", "5", "10"])
        );
    }

    #[test]
    fn json_round_trip() {
        let p = VoteProfile::from_rankings(
            ["A", "B", "C"],
            [(vec![0, 1, 2], 2), (vec![1, 2, 0], 1), (vec![2, 1, 0], 2)],
        )
        .unwrap();
        let set = explain(
            &p,
            1,
            &ExplainOptions {
                n: 3,
                seed: 4,
                audit: true,
            },
        )
        .unwrap();
        let rep = ExplanationReport::new(&set, &p);
        let back: ExplanationReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
        assert_eq!(back.surviving_features.as_ref().unwrap().len(), 5);
        assert_eq!(back.items[0].normalized_score, "3/2");
    }
}
