//! Slow, literal re-implementation of the explanation pipeline used as a
//! test oracle. It expands the profile into one ballot per voter and
//! recomputes every feature from per-voter ranks; nothing here calls into
//! `features` or `engine`.

use num_traits::Signed;

use crate::features::FeatureKind;
use crate::profile::VoteProfile;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceScore {
    pub feature: FeatureKind,
    pub raw_score: Rational,
    pub normalized_score: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceOutcome {
    /// Survivors sorted by normalized score, descending; ties in canonical
    /// feature order.
    pub survivors: Vec<ReferenceScore>,
    /// Normalized scores of the top `n` survivors.
    pub selected_scores: Vec<Rational>,
}

struct Ballots {
    m: usize,
    /// `ranks[v][x]` is the 1-based rank voter `v` gives candidate `x`.
    ranks: Vec<Vec<usize>>,
}

impl Ballots {
    fn expand(p: &VoteProfile) -> Self {
        let m = p.n_candidates();
        let mut ranks = Vec::new();
        for g in p.groups() {
            let mut r = vec![0; m];
            for (pos, &c) in g.order.ranking().iter().enumerate() {
                r[c] = pos + 1;
            }
            for _ in 0..g.count {
                ranks.push(r.clone());
            }
        }
        Self { m, ranks }
    }

    fn n(&self) -> i64 {
        self.ranks.len() as i64
    }

    fn count(&self, pred: impl Fn(&[usize]) -> bool) -> i64 {
        self.ranks.iter().filter(|r| pred(r)).count() as i64
    }

    fn prefer(&self, x: usize, y: usize) -> i64 {
        self.count(|r| r[x] < r[y])
    }

    /// `(values, norm, lower_is_better)`
    fn feature(&self, kind: FeatureKind) -> (Vec<Rational>, Rational, bool) {
        let m = self.m;
        let n = self.n();
        let int = Rational::from_integer;
        let per = |f: &dyn Fn(usize) -> Rational| (0..m).map(f).collect::<Vec<_>>();
        match kind {
            FeatureKind::Plurality => (per(&|x| int(self.count(|r| r[x] == 1))), int(n), false),
            FeatureKind::LastPlace => (per(&|x| int(self.count(|r| r[x] == m))), int(n), true),
            FeatureKind::Borda => (
                per(&|x| int(self.ranks.iter().map(|r| (m - r[x]) as i64).sum())),
                int(n * (m as i64 - 1)),
                false,
            ),
            FeatureKind::Bucklin => {
                let mut depth = 1;
                while depth < m && !(0..m).any(|x| 2 * self.count(|r| r[x] <= depth) > n) {
                    depth += 1;
                }
                (per(&|x| int(self.count(|r| r[x] <= depth))), int(n), false)
            }
            FeatureKind::HeadToHead => {
                // Doubled Copeland: 2 per win, 1 per draw.
                let doubled = |x: usize| -> i64 {
                    (0..m)
                        .filter(|&y| y != x)
                        .map(|y| {
                            let (a, b) = (self.prefer(x, y), self.prefer(y, x));
                            if a > b {
                                2
                            } else if a == b {
                                1
                            } else {
                                0
                            }
                        })
                        .sum()
                };
                (
                    per(&|x| Rational::new(doubled(x), 2)),
                    int(m as i64 - 1),
                    false,
                )
            }
            FeatureKind::Gpo => (
                per(&|x| {
                    int((0..m)
                        .filter(|&y| y != x)
                        .map(|y| self.prefer(y, x))
                        .max()
                        .unwrap_or(0))
                }),
                int(n),
                true,
            ),
        }
    }
}

/// Oracle for the explanation pipeline. Intended for desk-scale profiles
/// (a handful of candidates, tens of voters).
pub fn reference_explain(p: &VoteProfile, winner: usize, n: usize) -> ReferenceOutcome {
    let ballots = Ballots::expand(p);
    let mut survivors = Vec::new();
    if ballots.m >= 2 {
        'features: for kind in FeatureKind::ALL {
            let (d, norm, lower_is_better) = ballots.feature(kind);
            for t in 0..ballots.m {
                if t == winner {
                    continue;
                }
                let inferior = if lower_is_better {
                    d[winner] > d[t]
                } else {
                    d[winner] < d[t]
                };
                if inferior {
                    continue 'features;
                }
            }
            let mut raw = Rational::from_integer(0);
            for t in 0..ballots.m {
                if t != winner {
                    raw += (d[winner] - d[t]).abs();
                }
            }
            survivors.push(ReferenceScore {
                feature: kind,
                raw_score: raw,
                normalized_score: raw / norm,
            });
        }
    } else {
        // One candidate: only the counting features are defined.
        for kind in [
            FeatureKind::Plurality,
            FeatureKind::Bucklin,
            FeatureKind::LastPlace,
        ] {
            survivors.push(ReferenceScore {
                feature: kind,
                raw_score: Rational::from_integer(0),
                normalized_score: Rational::from_integer(0),
            });
        }
    }
    survivors.sort_by(|a, b| {
        b.normalized_score
            .cmp(&a.normalized_score)
            .then(a.feature.cmp(&b.feature))
    });
    let selected_scores = survivors
        .iter()
        .take(n)
        .map(|s| s.normalized_score)
        .collect();
    ReferenceOutcome {
        survivors,
        selected_scores,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_profile_scores() {
        let p = VoteProfile::from_rankings(
            ["A", "B", "C"],
            [(vec![0, 1, 2], 2), (vec![1, 2, 0], 1), (vec![2, 1, 0], 2)],
        )
        .unwrap();
        let out = reference_explain(&p, 1, 3);
        let codes: Vec<_> = out
            .survivors
            .iter()
            .map(|s| s.feature.short_code())
            .collect();
        assert_eq!(codes, ["H", "BR", "L", "M", "B"]);
        assert_eq!(out.survivors[0].normalized_score, Rational::new(3, 2));
        assert_eq!(
            out.selected_scores,
            vec![
                Rational::new(3, 2),
                Rational::from_integer(1),
                Rational::from_integer(1)
            ]
        );
    }
}
