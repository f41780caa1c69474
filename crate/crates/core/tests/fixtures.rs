use std::collections::BTreeSet;

use voteexplain_core::engine::{self, ExplainOptions, FilterSemantics};
use voteexplain_core::features::FeatureKind;
use voteexplain_core::fixtures::{self, reference_explain};

#[test]
fn committed_file_matches_fresh_search() {
    let derived = fixtures::derive_all(&fixtures::published_instances());
    assert!(derived.iter().all(|d| d.is_consistent()));
    assert_eq!(
        fixtures::fixture_file(&derived),
        fixtures::committed_fixture_text(),
        "regenerate with `voteexplain derive --format json`"
    );
}

#[test]
fn committed_records_reverify() {
    let insts = fixtures::published_instances();
    for rec in fixtures::committed_fixtures() {
        let inst = insts.iter().find(|i| i.id == rec.id).unwrap();
        let p = rec.vote_profile();
        let w = rec.winner_index();
        assert_eq!(p.n_voters(), 29);
        let kept = engine::filter_features(&p, w, &FeatureKind::ALL).unwrap();
        assert_eq!(kept, inst.expected_winner_features, "instance {}", rec.id);
        let set = engine::explain(
            &p,
            w,
            &ExplainOptions {
                n: 3,
                seed: 0,
                audit: true,
            },
        )
        .unwrap();
        let expected: BTreeSet<_> = inst.expected_explanations.iter().copied().collect();
        assert_eq!(set.features(), expected, "instance {}", rec.id);
        assert!(rec.verified.winner_features && rec.verified.explanation_set);
        assert_eq!(rec.semantics, "weak");
    }
}

#[test]
fn paired_instances_share_ballots() {
    let recs = fixtures::committed_fixtures();
    let get = |id: &str| recs.iter().find(|r| r.id == id).unwrap();
    for (a, b) in [("3", "3a"), ("4", "4a")] {
        assert_eq!(get(a).profile, get(b).profile);
        assert_ne!(get(a).winner, get(b).winner);
    }
}

#[test]
fn shared_distribution_admits_both_winners() {
    let insts = fixtures::published_instances();
    let pairs = fixtures::derive_joint(&insts[2], &insts[3], FilterSemantics::Weak).unwrap();
    let p = pairs
        .iter()
        .find(|(a, b)| a.verified.consistent() && b.verified.consistent());
    let (a, b) = p.expect("3 and 3a share a consistent assignment");
    let prof = a.profile(&insts[2]);
    assert_eq!(
        engine::filter_features(&prof, a.winner, &FeatureKind::ALL).unwrap(),
        BTreeSet::from([FeatureKind::Plurality])
    );
    assert_eq!(
        engine::filter_features(&prof, b.winner, &FeatureKind::ALL)
            .unwrap()
            .len(),
        5
    );
}

#[test]
fn instance_two_has_an_exact_tie() {
    let insts = fixtures::published_instances();
    let found = fixtures::derive_assignments(&insts[1], FilterSemantics::Weak).unwrap();
    let tie = found.iter().filter(|a| a.verified.consistent()).any(|a| {
        let p = a.profile(&insts[1]);
        let l = engine::score_feature(&p, a.winner, FeatureKind::LastPlace).unwrap();
        let br = engine::score_feature(&p, a.winner, FeatureKind::Bucklin).unwrap();
        l.normalized_score == br.normalized_score
    });
    assert!(tie);
}

#[test]
fn engine_agrees_with_reference_on_fixtures() {
    for rec in fixtures::committed_fixtures() {
        let p = rec.vote_profile();
        let w = rec.winner_index();
        let oracle = reference_explain(&p, w, 3);
        let ranked = engine::ranked_survivors(&p, w, 0).unwrap();
        let mine: BTreeSet<_> = ranked
            .iter()
            .map(|s| (s.feature, s.raw_score, s.normalized_score))
            .collect();
        let theirs: BTreeSet<_> = oracle
            .survivors
            .iter()
            .map(|s| (s.feature, s.raw_score, s.normalized_score))
            .collect();
        assert_eq!(mine, theirs, "instance {}", rec.id);
    }
}

#[test]
fn both_filter_readings_fit_the_instances() {
    // The published instances do not discriminate between the weak and
    // strict readings; the search settles on weak because it is tried first.
    for inst in fixtures::published_instances() {
        for semantics in [FilterSemantics::Weak, FilterSemantics::Strict] {
            let found = fixtures::derive_assignments(&inst, semantics).unwrap();
            assert!(
                found.iter().any(|a| a.verified.consistent()),
                "instance {} under {:?}",
                inst.id,
                semantics
            );
        }
    }
    for d in fixtures::derive_all(&fixtures::published_instances()) {
        assert_eq!(d.semantics, Some(FilterSemantics::Weak));
    }
}
