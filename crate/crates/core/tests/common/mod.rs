#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use voteexplain_core::profile::VoteProfile;

pub const NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];

/// `N` voters with independent uniformly random complete ballots.
pub fn random_profile<R: Rng>(rng: &mut R, m: usize, n_voters: u64) -> VoteProfile {
    let ballots = (0..n_voters).map(|_| {
        let mut r: Vec<usize> = (0..m).collect();
        r.shuffle(rng);
        (r, 1)
    });
    VoteProfile::from_rankings(NAMES[..m].iter().copied(), ballots).unwrap()
}

pub fn p5() -> VoteProfile {
    VoteProfile::from_rankings(
        ["A", "B", "C"],
        [(vec![0, 1, 2], 2), (vec![1, 2, 0], 1), (vec![2, 1, 0], 2)],
    )
    .unwrap()
}

pub fn u1() -> VoteProfile {
    VoteProfile::from_rankings(["A", "B", "C"], [(vec![0, 1, 2], 5)]).unwrap()
}

fn ranking(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle()
}

/// Profiles with 2..=5 candidates and 1..=15 voters.
pub fn arb_profile() -> impl Strategy<Value = VoteProfile> {
    (2usize..=5).prop_flat_map(|m| {
        prop::collection::vec((ranking(m), 1u64..=4), 1..=6).prop_map(move |groups| {
            VoteProfile::from_rankings(NAMES[..m].iter().copied(), groups).unwrap()
        })
    })
}

/// A profile together with a candidate index and a relabeling permutation.
pub fn arb_profile_winner_perm() -> impl Strategy<Value = (VoteProfile, usize, Vec<usize>)> {
    arb_profile().prop_flat_map(|p| {
        let m = p.n_candidates();
        (Just(p), 0..m, ranking(m))
    })
}
