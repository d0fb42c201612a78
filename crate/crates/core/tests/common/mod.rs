//! Random instance generators and brute-force oracles shared by the
//! integration tests. Every oracle here is deliberately naive.

#![allow(dead_code)]

use std::collections::BTreeSet;

use plk_core::linalg::{int, ratio, Matrix, Rational};
use plk_core::{KineticOrderMatrix, Network};
use rand::rngs::StdRng;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// A network whose complexes are single species `X<v>`, one per vertex
/// used by `arcs`, labelled `q0, q1, ...`.
pub fn monospecies_network(arcs: &[(usize, usize)]) -> Network {
    let mut vertices: Vec<usize> = Vec::new();
    for &(u, v) in arcs {
        for w in [u, v] {
            if !vertices.contains(&w) {
                vertices.push(w);
            }
        }
    }
    let m = vertices.len();
    let species = vertices.iter().map(|v| format!("X{v}")).collect();
    let complexes = (0..m).map(|i| unit(m, i)).collect();
    let pos = |w: usize| vertices.iter().position(|&x| x == w).unwrap();
    let reactions = arcs.iter().enumerate().map(|(q, &(u, v))| (format!("q{q}"), pos(u), pos(v))).collect();
    Network::build(species, complexes, reactions).expect("valid digraph")
}

pub fn unit(m: usize, i: usize) -> Vec<Rational> {
    (0..m).map(|j| if j == i { int(1) } else { int(0) }).collect()
}

/// Distinct loop-free arcs on `n` vertices.
pub fn random_arcs(rng: &mut StdRng, n: usize, count: usize) -> Vec<(usize, usize)> {
    let mut all: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    all.truncate(count);
    all
}

/// A strongly connected digraph on `vertices`: a random Hamiltonian cycle
/// plus `extra` random arcs.
pub fn strongly_connected(rng: &mut StdRng, vertices: &[usize], extra: usize) -> Vec<(usize, usize)> {
    let mut order = vertices.to_vec();
    order.shuffle(rng);
    let k = order.len();
    let mut arcs: Vec<(usize, usize)> = (0..k).map(|i| (order[i], order[(i + 1) % k])).collect();
    let mut others: Vec<(usize, usize)> = vertices
        .iter()
        .flat_map(|&u| vertices.iter().filter(move |&&v| v != u).map(move |&v| (u, v)))
        .filter(|a| !arcs.contains(a))
        .collect();
    others.shuffle(rng);
    arcs.extend(others.into_iter().take(extra));
    arcs
}

/// All simple cycles through `y`, as arc sequences starting at `y`, by
/// plain depth-first search.
pub fn brute_cycles_through(arcs: &[(usize, usize)], y: usize) -> BTreeSet<Vec<usize>> {
    fn go(
        arcs: &[(usize, usize)],
        y: usize,
        at: usize,
        visited: &mut Vec<usize>,
        path: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        for (q, &(u, v)) in arcs.iter().enumerate() {
            if u != at {
                continue;
            }
            path.push(q);
            if v == y {
                out.insert(path.clone());
            } else if !visited.contains(&v) {
                visited.push(v);
                go(arcs, y, v, visited, path, out);
                visited.pop();
            }
            path.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(arcs, y, y, &mut vec![y], &mut Vec::new(), &mut out);
    out
}

/// Every arc's head reaches its tail using only arcs of `block`.
pub fn block_weakly_reversible(arcs: &[(usize, usize)], block: &[usize]) -> bool {
    block.iter().all(|&q| {
        let (tail, head) = arcs[q];
        let mut seen = vec![head];
        let mut stack = vec![head];
        while let Some(w) = stack.pop() {
            if w == tail {
                return true;
            }
            for &p in block {
                let (u, v) = arcs[p];
                if u == w && !seen.contains(&v) {
                    seen.push(v);
                    stack.push(v);
                }
            }
        }
        false
    })
}

/// Reactions with the same reactant in `block` share one kinetic-order row.
pub fn block_cf(net: &Network, kinetics: &KineticOrderMatrix, block: &[usize]) -> bool {
    block
        .iter()
        .all(|&a| block.iter().all(|&b| net.arcs()[a].0 != net.arcs()[b].0 || kinetics.row(a) == kinetics.row(b)))
}

/// Calls `visit` on every set partition of `0..r` until it returns true.
pub fn any_partition(r: usize, mut visit: impl FnMut(&[Vec<usize>]) -> bool) -> bool {
    fn go(q: usize, r: usize, blocks: &mut Vec<Vec<usize>>, visit: &mut dyn FnMut(&[Vec<usize>]) -> bool) -> bool {
        if q == r {
            return visit(blocks);
        }
        for i in 0..blocks.len() {
            blocks[i].push(q);
            let hit = go(q + 1, r, blocks, visit);
            blocks[i].pop();
            if hit {
                return true;
            }
        }
        blocks.push(vec![q]);
        let hit = go(q + 1, r, blocks, visit);
        blocks.pop();
        hit
    }
    go(0, r, &mut Vec::new(), &mut visit)
}

/// Brute-force existence of a weakly reversible CF-decomposition.
pub fn brute_wr_cf_exists(net: &Network, kinetics: &KineticOrderMatrix) -> bool {
    any_partition(net.reaction_count(), |blocks| {
        blocks.iter().all(|b| block_weakly_reversible(net.arcs(), b) && block_cf(net, kinetics, b))
    })
}

/// A weakly reversible single-linkage-class network on monospecies
/// complexes with exactly one NF node, and at most `max_reactions`
/// reactions.
pub fn random_single_nf(rng: &mut StdRng, max_reactions: usize) -> (Network, KineticOrderMatrix, usize) {
    loop {
        let n = rng.random_range(3..=6usize);
        let extra = rng.random_range(1..=max_reactions - n);
        let vertices: Vec<usize> = (0..n).collect();
        let arcs = strongly_connected(rng, &vertices, extra);
        let net = monospecies_network(&arcs);
        let branching: Vec<usize> = (0..net.complex_count()).filter(|&c| net.reactions_from(c).len() >= 2).collect();
        let Some(&y) = branching.choose(rng) else { continue };
        let out = net.reactions_from(y);
        let groups = rng.random_range(2..=out.len());
        let mut f = KineticOrderMatrix::mass_action(&net).matrix().clone();
        // The complex `y` is the species with the same index.
        for (i, &q) in out.iter().enumerate() {
            let g = if i < 2 { i } else { rng.random_range(0..groups) };
            f.set(q, y, int(1 + g as i64));
        }
        return (net, KineticOrderMatrix::new(f), y);
    }
}

/// A network with up to `max_species` species and `max_reactions`
/// reactions between random complexes with coefficients in {0, 1, 2}.
pub fn random_network(rng: &mut StdRng, max_species: usize, max_reactions: usize) -> Network {
    loop {
        let m = rng.random_range(1..=max_species);
        let r = rng.random_range(1..=max_reactions);
        let pool_size = rng.random_range(2..=(r + 2).min(8));
        let mut pool: Vec<Vec<Rational>> = Vec::new();
        for _ in 0..4 * pool_size {
            if pool.len() == pool_size {
                break;
            }
            let c: Vec<Rational> = (0..m).map(|_| int(rng.random_range(0..=2))).collect();
            if !pool.contains(&c) {
                pool.push(c);
            }
        }
        if pool.len() < 2 {
            continue;
        }
        let pairs = random_arcs(rng, pool.len(), r);
        let mut used: Vec<usize> = Vec::new();
        for &(u, v) in &pairs {
            for w in [u, v] {
                if !used.contains(&w) {
                    used.push(w);
                }
            }
        }
        let complexes = used.iter().map(|&w| pool[w].clone()).collect();
        let pos = |w: usize| used.iter().position(|&x| x == w).unwrap();
        let reactions = pairs.iter().enumerate().map(|(q, &(u, v))| (format!("q{q}"), pos(u), pos(v))).collect();
        let species = (0..m).map(|i| format!("S{i}")).collect();
        return Network::build(species, complexes, reactions).expect("generated network is valid");
    }
}

/// A random partition of `0..r` into at most `k` nonempty blocks.
pub fn random_partition(rng: &mut StdRng, r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k.max(1)];
    for q in 0..r {
        let i = rng.random_range(0..blocks.len());
        blocks[i].push(q);
    }
    blocks.retain(|b| !b.is_empty());
    blocks
}

/// A weakly reversible PL-RDK system on monospecies complexes with one or
/// two linkage classes on disjoint species, deficiency 0, and random
/// kinetic-order rows (one per reactant, complex `c` is species `c`). The kinetic complex deficiency is
/// not checked here.
pub fn random_zero_deficiency_rdk(rng: &mut StdRng, max_species: usize) -> (Network, KineticOrderMatrix) {
    let m = rng.random_range(2..=max_species);
    let split = if m >= 4 && rng.random_bool(0.5) { rng.random_range(2..=m - 2) } else { m };
    let mut arcs = Vec::new();
    for class in [(0..split).collect::<Vec<_>>(), (split..m).collect()] {
        if class.len() >= 2 {
            let max_extra = class.len() * (class.len() - 1) - class.len();
            let extra = rng.random_range(0..=max_extra);
            arcs.extend(strongly_connected(rng, &class, extra));
        }
    }
    let net = monospecies_network(&arcs);
    // Mass-action rows plus a perturbation keep the equilibria at moderate
    // concentrations; arbitrary rows can put them at e^±50.
    let rows: Vec<Vec<Rational>> = (0..net.complex_count())
        .map(|c| {
            (0..net.species_count())
                .map(|j| {
                    ratio(rng.random_range(-3..=3), 8) + if j == c { int(rng.random_range(1..=2)) } else { int(0) }
                })
                .collect()
        })
        .collect();
    let f: Vec<Vec<Rational>> = net.reactions().iter().map(|r| rows[r.reactant].clone()).collect();
    let kinetics = KineticOrderMatrix::new(Matrix::from_rows(net.species_count(), f).unwrap());
    (net, kinetics)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
