//! Decomposition searches against exhaustive enumeration of set partitions.

mod common;

use common::*;
use plk_core::independence::{finest_independent, independent_wr_cf, is_independent};
use plk_core::linalg::{int, Rational};
use plk_core::wrcf::{cfc_covering, verify_wr_cf, wr_cf_search, SearchLimits, SearchMode, SearchStatus};
use plk_core::{KineticOrderMatrix, Network};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Weakly reversible, one or two linkage classes over random complexes
/// (so reaction vectors can be dependent across classes), with random
/// CF-subsets at every branching reactant.
fn random_wr_system(seed: u64, max_reactions: usize) -> (Network, KineticOrderMatrix) {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let m = rng.random_range(1..=3usize);
        let n = rng.random_range(3..=6usize).min(3usize.pow(m as u32));
        let mut pool: Vec<Vec<Rational>> = Vec::new();
        while pool.len() < n {
            let c: Vec<Rational> = (0..m).map(|_| int(rng.random_range(0..=2))).collect();
            if !pool.contains(&c) {
                pool.push(c);
            }
        }
        let mut vertices: Vec<usize> = (0..n).collect();
        vertices.shuffle(&mut rng);
        let split = if n >= 4 && rng.random_bool(0.4) { rng.random_range(2..=n - 2) } else { n };
        let mut arcs = Vec::new();
        for class in [&vertices[..split], &vertices[split..]] {
            if class.len() >= 2 {
                let room = max_reactions.saturating_sub(arcs.len() + class.len());
                let extra = rng.random_range(0..=room.min(class.len() * (class.len() - 2)));
                arcs.extend(strongly_connected(&mut rng, class, extra));
            }
        }
        if arcs.len() > max_reactions {
            continue;
        }
        let mut used: Vec<usize> = Vec::new();
        for &(u, v) in &arcs {
            for w in [u, v] {
                if !used.contains(&w) {
                    used.push(w);
                }
            }
        }
        let complexes: Vec<Vec<Rational>> = used.iter().map(|&w| pool[w].clone()).collect();
        let pos = |w: usize| used.iter().position(|&x| x == w).unwrap();
        let reactions = arcs.iter().enumerate().map(|(q, &(u, v))| (format!("q{q}"), pos(u), pos(v))).collect();
        let species = (0..m).map(|i| format!("S{i}")).collect();
        let net = Network::build(species, complexes, reactions).unwrap();
        let mut f = KineticOrderMatrix::mass_action(&net).matrix().clone();
        for c in net.reactant_complexes() {
            let out = net.reactions_from(c);
            if out.len() >= 2 && rng.random_bool(0.6) {
                let groups = rng.random_range(2..=out.len());
                for &q in &out {
                    let g = rng.random_range(0..groups) as i64;
                    let shifted = f.get(q, 0) + int(g) * int(3);
                    f.set(q, 0, shifted);
                }
            }
        }
        return (net, KineticOrderMatrix::new(f));
    }
}

fn brute_independent_wr_cf(net: &Network, kinetics: &KineticOrderMatrix) -> bool {
    any_partition(net.reaction_count(), |blocks| {
        blocks.iter().all(|b| block_weakly_reversible(net.arcs(), b) && block_cf(net, kinetics, b))
            && is_independent(net, blocks)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exhaustive_search_matches_brute_force(seed in any::<u64>()) {
        let (net, f) = random_wr_system(seed, 8);
        let found = wr_cf_search(&net, &f, SearchMode::Exhaustive, SearchLimits::default()).unwrap();
        prop_assert_ne!(found.status, SearchStatus::ResourceLimit);
        prop_assert_eq!(found.is_found(), brute_wr_cf_exists(&net, &f), "arcs {:?}", net.arcs());
        if let Some(d) = &found.decomposition {
            prop_assert!(verify_wr_cf(&net, &f, d).valid);
        }
    }

    #[test]
    fn greedy_is_sound(seed in any::<u64>()) {
        let (net, f) = random_wr_system(seed, 8);
        let found = wr_cf_search(&net, &f, SearchMode::Greedy, SearchLimits::default()).unwrap();
        match &found.decomposition {
            Some(d) => prop_assert!(verify_wr_cf(&net, &f, d).valid),
            None => prop_assert_ne!(found.status, SearchStatus::NotFoundProven),
        }
    }

    #[test]
    fn independent_search_matches_brute_force(seed in any::<u64>()) {
        let (net, f) = random_wr_system(seed, 7);
        let found = independent_wr_cf(&net, &f, SearchLimits::default()).unwrap();
        prop_assert_ne!(found.status, SearchStatus::ResourceLimit);
        prop_assert_eq!(found.status == SearchStatus::Found, brute_independent_wr_cf(&net, &f), "arcs {:?}", net.arcs());
        if let Some(d) = &found.decomposition {
            prop_assert!(verify_wr_cf(&net, &f, d).valid);
            prop_assert!(is_independent(&net, d.blocks()));
        }
    }

    /// One weakly reversible block per CF-subset of the NF node.
    #[test]
    fn cfc_covering_blocks_are_weakly_reversible(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (net, f, y) = random_single_nf(&mut rng, 9);
        let cover = cfc_covering(&net, &f, y, usize::MAX).unwrap();
        let nodes = plk_core::kinetics::classify_nodes(&net, &f).unwrap();
        prop_assert_eq!(cover.blocks.len(), nodes.cf_count(y));
        for b in &cover.blocks {
            prop_assert!(block_weakly_reversible(net.arcs(), b));
        }
        let mut count = vec![0usize; net.reaction_count()];
        for b in &cover.blocks {
            for &q in b {
                count[q] += 1;
            }
        }
        prop_assert_eq!(cover.is_decomposition, count.iter().all(|&c| c == 1));
    }

    /// The finest independent decomposition cannot be split further.
    #[test]
    fn finest_independent_blocks_do_not_split(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let net = random_network(&mut rng, 4, 8);
        let fine = finest_independent(&net);
        for block in fine.decomposition.blocks() {
            let k = block.len();
            for mask in 1..(1u32 << (k - 1)) {
                let a: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| block[i]).collect();
                let b: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) == 0).map(|i| block[i]).collect();
                let split = net.stoichiometric_subspace_of(&a).dim() + net.stoichiometric_subspace_of(&b).dim();
                prop_assert!(split > net.stoichiometric_subspace_of(block).dim(), "{:?} splits as {:?} + {:?}", block, a, b);
            }
        }
    }
}
