//! Digraph structure: weak reversibility, Eulerian cycle decompositions and
//! cycle enumeration, each against a naive oracle.

mod common;

use std::collections::BTreeSet;

use common::*;
use plk_core::cycles::{cycles_through_arc, cycles_through_vertex};
use plk_core::digraph::ArcGraph;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn digraph(seed: u64, max_vertices: usize, max_arcs: usize) -> (usize, Vec<(usize, usize)>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_vertices);
    let count = rng.random_range(1..=max_arcs.min(n * (n - 1)));
    (n, random_arcs(&mut rng, n, count))
}

/// Is `arcs` (a subset of the graph) a single simple directed cycle?
fn is_simple_cycle(all: &[(usize, usize)], arcs: &[usize]) -> bool {
    let mut outs: Vec<usize> = arcs.iter().map(|&a| all[a].0).collect();
    let mut ins: Vec<usize> = arcs.iter().map(|&a| all[a].1).collect();
    outs.sort_unstable();
    ins.sort_unstable();
    let distinct = outs.windows(2).all(|w| w[0] != w[1]);
    if !distinct || outs != ins {
        return false;
    }
    // Connected: walking from the first arc returns after |arcs| steps.
    let mut at = all[arcs[0]].1;
    for _ in 1..arcs.len() {
        let Some(&next) = arcs.iter().find(|&&a| all[a].0 == at) else { return false };
        at = all[next].1;
    }
    at == all[arcs[0]].0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weak_reversibility_definitions_agree(seed in any::<u64>()) {
        let (_, arcs) = digraph(seed, 6, 10);
        let net = monospecies_network(&arcs);
        let all: Vec<usize> = (0..net.reaction_count()).collect();
        let by_arcs = block_weakly_reversible(net.arcs(), &all);
        let s = net.summarize();
        prop_assert_eq!(net.is_weakly_reversible(), by_arcs);
        prop_assert_eq!(s.weakly_reversible, s.strong_linkage_classes == s.linkage_classes);
        prop_assert_eq!(s.weakly_reversible, by_arcs);
    }

    /// Even ⇔ the arcs split into simple cycles (brute force over
    /// partitions), and the returned split is such a partition.
    #[test]
    fn even_iff_cycle_decomposable(seed in any::<u64>()) {
        let (n, arcs) = digraph(seed, 5, 8);
        let graph = ArcGraph::full(n, &arcs);
        let brute = any_partition(arcs.len(), |blocks| blocks.iter().all(|b| is_simple_cycle(&arcs, b)));
        prop_assert_eq!(graph.is_even(), brute);
        match graph.cycle_decomposition() {
            Some(cycles) => {
                let mut seen: Vec<usize> = cycles.iter().flatten().copied().collect();
                seen.sort_unstable();
                prop_assert_eq!(seen, (0..arcs.len()).collect::<Vec<_>>());
                for c in &cycles {
                    prop_assert!(is_simple_cycle(&arcs, c), "{:?} is not a simple cycle", c);
                }
            }
            None => prop_assert!(!brute),
        }
    }

    #[test]
    fn cycles_through_vertex_and_arc_match_dfs(seed in any::<u64>()) {
        let (n, arcs) = digraph(seed, 7, 12);
        let graph = ArcGraph::full(n, &arcs);
        for v in 0..n {
            let got: BTreeSet<Vec<usize>> = cycles_through_vertex(&graph, v, usize::MAX).cycles.into_iter().collect();
            prop_assert_eq!(got, brute_cycles_through(&arcs, v));
        }
        for (a, &(u, _)) in arcs.iter().enumerate() {
            let got: BTreeSet<BTreeSet<usize>> = cycles_through_arc(&graph, a, usize::MAX)
                .cycles
                .into_iter()
                .map(|c| c.into_iter().collect())
                .collect();
            let want: BTreeSet<BTreeSet<usize>> = brute_cycles_through(&arcs, u)
                .into_iter()
                .filter(|c| c.contains(&a))
                .map(|c| c.into_iter().collect())
                .collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn cycle_limit_truncates(seed in any::<u64>()) {
        let (n, arcs) = digraph(seed, 6, 12);
        let graph = ArcGraph::full(n, &arcs);
        let full = cycles_through_vertex(&graph, 0, usize::MAX);
        prop_assert!(!full.truncated);
        if full.cycles.len() > 1 {
            let cut = cycles_through_vertex(&graph, 0, 1);
            prop_assert!(cut.truncated);
            prop_assert_eq!(cut.cycles.len(), 1);
        }
    }
}
