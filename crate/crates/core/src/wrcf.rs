//! Searching for weakly reversible CF-decompositions of PL-NDK systems.
//!
//! Two modes are offered. `Greedy` follows the cycle-covering construction:
//! for each CF-subset of an NF node `y` in turn, pick the first simple cycle
//! through `y` starting with each of its branching reactions, then attach
//! the leftover reactions to blocks through further cycles. It commits to
//! its first choices, so a negative answer only means "this construction
//! failed".
//!
//! `Exhaustive` is a backtracking cover: every reaction must lie on a
//! simple cycle inside its block, so blocks are unions of cycles. Cycles
//! sharing a reaction are merged, and merges that would put two CF-subsets
//! of one reactant into the same block are rejected. A negative answer is a
//! proof of non-existence unless a resource limit was hit.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::cycles::{cycles_through_arc, cycles_through_vertex};
use crate::decomposition::{canonical_blocks, make_decomposition, Decomposition, DecompositionError};
use crate::kinetics::{classify_nodes, classify_nodes_within, KineticOrderMatrix, KineticsError, NodeClass};
use crate::network::Network;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Kinetics(#[from] KineticsError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("complex {0} is not the reactant of any reaction")]
    NotReactant(usize),
    #[error("complex {0} is not an NF node")]
    NotNfNode(usize),
    #[error("expected a single NF node, found {0:?}")]
    MultipleNfNodes(Vec<usize>),
    #[error("expected one linkage class, found {0}")]
    NotSingleLinkageClass(usize),
    #[error("the network is not weakly reversible")]
    NotWeaklyReversible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    /// Cap on simple cycles enumerated per root.
    pub max_cycles: usize,
    /// Cap on backtracking nodes in exhaustive mode.
    pub max_branches: usize,
    /// Seed exhaustive search of Eulerian linkage classes with their
    /// arc-disjoint cycle decomposition.
    pub eulerian_fast_path: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_cycles: 10_000, max_branches: 1_000_000, eulerian_fast_path: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleCycle {
    /// Reactions in traversal order, starting with the branching reaction.
    pub arcs: Vec<usize>,
    pub branch_reaction: usize,
    /// CF-subset of the anchor that `branch_reaction` belongs to.
    pub cf_index: usize,
}

/// Simple cycles through one reactant, grouped by CF-subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleListing {
    pub anchor: usize,
    pub by_cf: Vec<Vec<SimpleCycle>>,
    pub truncated: bool,
}

impl CycleListing {
    pub fn len(&self) -> usize {
        self.by_cf.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn enumerate_cycles_through(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    y: usize,
    limit: usize,
) -> Result<CycleListing, SearchError> {
    let classes = classify_nodes(net, kinetics)?;
    let node = classes.node(y).ok_or(SearchError::NotReactant(y))?;
    let graph = net.graph();
    let found = cycles_through_vertex(&graph, y, limit);
    let mut by_cf = vec![Vec::new(); node.cf_count()];
    for arcs in found.cycles {
        let branch_reaction = arcs[0];
        let cf_index = node.cf_index_of(branch_reaction).expect("branch reaction leaves y");
        by_cf[cf_index].push(SimpleCycle { arcs, branch_reaction, cf_index });
    }
    Ok(CycleListing { anchor: y, by_cf, truncated: found.truncated })
}

/// The CF-cycle subnetworks of a single NF node: block `i` collects every
/// reaction on some cycle through `y` that leaves `y` by CF-subset `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CfcCovering {
    pub anchor: usize,
    pub blocks: Vec<Vec<usize>>,
    /// The blocks are pairwise disjoint and cover every reaction.
    pub is_decomposition: bool,
    pub truncated: bool,
}

pub fn cfc_covering(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    y: usize,
    limit: usize,
) -> Result<CfcCovering, SearchError> {
    check_single_nf(net, kinetics, y)?;
    let listing = enumerate_cycles_through(net, kinetics, y, limit)?;
    let blocks: Vec<Vec<usize>> = listing
        .by_cf
        .iter()
        .map(|cycles| {
            let set: BTreeSet<usize> = cycles.iter().flat_map(|c| c.arcs.iter().copied()).collect();
            set.into_iter().collect()
        })
        .collect();
    let mut seen = vec![0usize; net.reaction_count()];
    for b in &blocks {
        for &q in b {
            seen[q] += 1;
        }
    }
    let is_decomposition = seen.iter().all(|&k| k == 1);
    Ok(CfcCovering { anchor: y, blocks, is_decomposition, truncated: listing.truncated })
}

fn check_single_nf(net: &Network, kinetics: &KineticOrderMatrix, y: usize) -> Result<NodeClass, SearchError> {
    let classes = classify_nodes(net, kinetics)?;
    let l = net.linkage_classes().len();
    if l != 1 {
        return Err(SearchError::NotSingleLinkageClass(l));
    }
    if !net.is_weakly_reversible() {
        return Err(SearchError::NotWeaklyReversible);
    }
    let node = classes.node(y).ok_or(SearchError::NotReactant(y))?;
    if !node.is_nf() {
        return Err(SearchError::NotNfNode(y));
    }
    let nf = classes.nf_nodes();
    if nf.len() > 1 {
        return Err(SearchError::MultipleNfNodes(nf));
    }
    Ok(node.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    /// Exhaustive search completed without finding one: none exists.
    NotFoundProven,
    /// The greedy construction failed; one may still exist.
    NotFoundGreedy,
    ResourceLimit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub cycles_enumerated: usize,
    pub branches: usize,
}

#[derive(Debug, Clone)]
pub struct WrCfResult {
    pub mode: SearchMode,
    pub status: SearchStatus,
    pub decomposition: Option<Decomposition>,
    pub reason: Option<String>,
    pub stats: SearchStats,
    /// Linkage classes (by index) that contain an NF node and are Eulerian,
    /// hence decomposable into arc-disjoint cycles.
    pub eulerian_nf_classes: Vec<usize>,
}

impl WrCfResult {
    pub fn is_found(&self) -> bool {
        self.status == SearchStatus::Found
    }

    pub fn blocks(&self) -> Option<&[Vec<usize>]> {
        self.decomposition.as_ref().map(Decomposition::blocks)
    }
}

enum Stop {
    Fail(String),
    Limit(String),
}

/// A WR CF-decomposition of a weakly reversible single-linkage-class
/// network with exactly one NF node `y`, in canonical form: one block per
/// CF-subset of `y`.
pub fn wr_cf_single(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    y: usize,
    mode: SearchMode,
    limits: SearchLimits,
) -> Result<WrCfResult, SearchError> {
    let node = match check_single_nf(net, kinetics, y) {
        Err(SearchError::NotWeaklyReversible) => {
            return Ok(negative(net, kinetics, mode, "the network is not weakly reversible"));
        }
        other => other?,
    };
    let mut stats = SearchStats::default();
    let all: Vec<usize> = (0..net.reaction_count()).collect();
    let outcome = match mode {
        SearchMode::Greedy => greedy_single(net, kinetics, &all, y, limits, &mut stats),
        SearchMode::Exhaustive => {
            let seed = eulerian_seed(net, limits);
            cover_search(net, kinetics, &all, Some(y), &seed, limits, &mut stats)
                .map(|pieces| lump_by_anchor(net, &node, pieces))
        }
    };
    finish(net, kinetics, mode, outcome, stats)
}

/// A WR CF-decomposition of a weakly reversible network with any number
/// of NF nodes and linkage classes.
pub fn wr_cf_search(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    mode: SearchMode,
    limits: SearchLimits,
) -> Result<WrCfResult, SearchError> {
    kinetics.check(net)?;
    if !net.is_weakly_reversible() {
        return Ok(negative(net, kinetics, mode, "the network is not weakly reversible"));
    }
    let mut stats = SearchStats::default();
    let outcome = match mode {
        SearchMode::Greedy => greedy_multi(net, kinetics, limits, &mut stats),
        SearchMode::Exhaustive => {
            let all: Vec<usize> = (0..net.reaction_count()).collect();
            let seed = eulerian_seed(net, limits);
            cover_search(net, kinetics, &all, None, &seed, limits, &mut stats)
                .map(|pieces| lump_compatible(net, kinetics, pieces))
        }
    };
    finish(net, kinetics, mode, outcome, stats)
}

/// Exhaustive search constrained so that every block is a union of the
/// given groups. Used to look for decompositions that are also coarsenings
/// of a fixed one.
pub(crate) fn wr_cf_coarsening(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    groups: &[Vec<usize>],
    limits: SearchLimits,
) -> Result<WrCfResult, SearchError> {
    kinetics.check(net)?;
    let mode = SearchMode::Exhaustive;
    if !net.is_weakly_reversible() {
        return Ok(negative(net, kinetics, mode, "the network is not weakly reversible"));
    }
    let mut stats = SearchStats::default();
    let all: Vec<usize> = (0..net.reaction_count()).collect();
    let outcome = cover_search(net, kinetics, &all, None, groups, limits, &mut stats)
        .map(|pieces| lump_compatible(net, kinetics, pieces));
    finish(net, kinetics, mode, outcome, stats)
}

fn negative(net: &Network, kinetics: &KineticOrderMatrix, mode: SearchMode, reason: &str) -> WrCfResult {
    WrCfResult {
        mode,
        status: SearchStatus::NotFoundProven,
        decomposition: None,
        reason: Some(reason.to_string()),
        stats: SearchStats::default(),
        eulerian_nf_classes: eulerian_nf_classes(net, kinetics),
    }
}

fn finish(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    mode: SearchMode,
    outcome: Result<Vec<Vec<usize>>, Stop>,
    stats: SearchStats,
) -> Result<WrCfResult, SearchError> {
    let eulerian_nf_classes = eulerian_nf_classes(net, kinetics);
    let (status, decomposition, reason) = match outcome {
        Ok(blocks) => {
            let d = make_decomposition(net, blocks)?;
            let check = verify_wr_cf(net, kinetics, &d);
            if !check.valid {
                return Err(DecompositionError::Inconsistent(format!(
                    "search produced an invalid decomposition: {:?}",
                    check.violations
                ))
                .into());
            }
            (SearchStatus::Found, Some(d), None)
        }
        Err(Stop::Fail(reason)) => {
            let status = match mode {
                SearchMode::Greedy => SearchStatus::NotFoundGreedy,
                SearchMode::Exhaustive => SearchStatus::NotFoundProven,
            };
            (status, None, Some(reason))
        }
        Err(Stop::Limit(reason)) => (SearchStatus::ResourceLimit, None, Some(reason)),
    };
    Ok(WrCfResult { mode, status, decomposition, reason, stats, eulerian_nf_classes })
}

fn eulerian_nf_classes(net: &Network, kinetics: &KineticOrderMatrix) -> Vec<usize> {
    let nf: BTreeSet<usize> =
        classify_nodes_within(net, kinetics, 0..net.reaction_count()).nf_nodes().into_iter().collect();
    net.linkage_classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.complexes.iter().any(|v| nf.contains(v)) && net.is_eulerian(c))
        .map(|(i, _)| i)
        .collect()
}

fn eulerian_seed(net: &Network, limits: SearchLimits) -> Vec<Vec<usize>> {
    if !limits.eulerian_fast_path {
        return Vec::new();
    }
    net.linkage_classes()
        .iter()
        .filter(|c| net.is_eulerian(c))
        .flat_map(|c| net.eulerian_cycle_decomposition(c).expect("class is Eulerian"))
        .collect()
}

// ---------------------------------------------------------------- greedy

fn greedy_single(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    block: &[usize],
    y: usize,
    limits: SearchLimits,
    stats: &mut SearchStats,
) -> Result<Vec<Vec<usize>>, Stop> {
    let node = classify_nodes_within(net, kinetics, block.iter().copied())
        .node(y)
        .cloned()
        .expect("y is a reactant of the block");
    let graph = net.graph_of(block.iter().copied());
    let found = cycles_through_vertex(&graph, y, limits.max_cycles);
    stats.cycles_enumerated += found.cycles.len();
    if found.truncated {
        return Err(Stop::Limit(format!("more than {} cycles through {}", limits.max_cycles, net.complex_label(y))));
    }
    let cycles = found.cycles;
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let fits = |owner: &HashMap<usize, usize>, cycle: &[usize], i: usize| {
        cycle.iter().all(|a| owner.get(a).is_none_or(|&o| o == i))
    };

    for (i, subset) in node.cf_subsets.iter().enumerate() {
        for &rho in subset {
            let Some(cycle) = cycles.iter().find(|c| c[0] == rho && fits(&owner, c, i)) else {
                return Err(Stop::Fail(format!(
                    "no cycle through {} starts with {} and avoids earlier blocks",
                    net.complex_label(y),
                    net.reaction(rho).label
                )));
            };
            for &a in cycle {
                owner.insert(a, i);
            }
        }
    }
    for &q in block {
        if owner.contains_key(&q) {
            continue;
        }
        let choice = cycles.iter().find_map(|c| {
            let i = node.cf_index_of(c[0]).expect("cycle leaves y");
            (c.contains(&q) && fits(&owner, c, i)).then_some((c, i))
        });
        let Some((cycle, i)) = choice else {
            return Err(Stop::Fail(format!(
                "reaction {} lies on no cycle through {} compatible with the blocks built so far",
                net.reaction(q).label,
                net.complex_label(y)
            )));
        };
        for &a in cycle {
            owner.insert(a, i);
        }
    }
    let mut blocks = vec![Vec::new(); node.cf_count()];
    for (q, i) in owner {
        blocks[i].push(q);
    }
    Ok(canonical_blocks(blocks))
}

/// NF nodes are processed in ascending order; every current block in which
/// the node is still NF is split by the single-node construction.
fn greedy_multi(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    limits: SearchLimits,
    stats: &mut SearchStats,
) -> Result<Vec<Vec<usize>>, Stop> {
    let nf = classify_nodes_within(net, kinetics, 0..net.reaction_count()).nf_nodes();
    let mut blocks: Vec<Vec<usize>> = net.linkage_classes().into_iter().map(|c| c.reactions).collect();
    for y in nf {
        let mut next = Vec::new();
        for b in blocks {
            let inner = classify_nodes_within(net, kinetics, b.iter().copied());
            if inner.node(y).is_some_and(NodeClass::is_nf) {
                next.extend(greedy_single(net, kinetics, &b, y, limits, stats)?);
            } else {
                next.push(b);
            }
        }
        blocks = next;
    }
    Ok(canonical_blocks(blocks))
}

// ------------------------------------------------------------ exhaustive

struct Cover<'n> {
    net: &'n Network,
    arcs: &'n [usize],
    /// CF label of each reaction at its reactant, when that reactant is
    /// constrained.
    label: Vec<Option<usize>>,
    candidates: HashMap<usize, Vec<Vec<usize>>>,
    limits: SearchLimits,
    truncated: bool,
}

#[derive(Clone)]
struct CoverState {
    comp: Vec<usize>,
    covered: Vec<bool>,
}

impl Cover<'_> {
    fn candidates(&mut self, arc: usize, stats: &mut SearchStats) -> Vec<Vec<usize>> {
        if let Some(c) = self.candidates.get(&arc) {
            return c.clone();
        }
        let graph = self.net.graph_of(self.arcs.iter().copied());
        let found = cycles_through_arc(&graph, arc, self.limits.max_cycles);
        stats.cycles_enumerated += found.cycles.len();
        self.truncated |= found.truncated;
        self.candidates.insert(arc, found.cycles.clone());
        found.cycles
    }

    fn consistent(&self, state: &CoverState, id: usize) -> bool {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for &q in self.arcs {
            if state.comp[q] != id {
                continue;
            }
            if let Some(l) = self.label[q] {
                let tail = self.net.arcs()[q].0;
                if *seen.entry(tail).or_insert(l) != l {
                    return false;
                }
            }
        }
        true
    }

    fn merge(&self, state: &mut CoverState, cycle: &[usize]) -> bool {
        let ids: BTreeSet<usize> = cycle.iter().map(|&a| state.comp[a]).collect();
        let id = *ids.first().expect("cycle is non-empty");
        for &q in self.arcs {
            if ids.contains(&state.comp[q]) {
                state.comp[q] = id;
            }
        }
        for &a in cycle {
            state.covered[a] = true;
        }
        self.consistent(state, id)
    }

    fn search(&mut self, state: CoverState, stats: &mut SearchStats) -> Result<Option<CoverState>, ()> {
        stats.branches += 1;
        if stats.branches > self.limits.max_branches {
            return Err(());
        }
        let Some(&arc) = self.arcs.iter().find(|&&q| !state.covered[q]) else {
            return Ok(Some(state));
        };
        for cycle in self.candidates(arc, stats) {
            let mut next = state.clone();
            if !self.merge(&mut next, &cycle) {
                continue;
            }
            if let Some(done) = self.search(next, stats)? {
                return Ok(Some(done));
            }
        }
        Ok(None)
    }
}

/// Finest cycle-union blocks covering `arcs`. With `anchor` set, only that
/// reactant is CF-constrained; otherwise all are. Each group in `seed` is
/// kept inside one block.
fn cover_search(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    arcs: &[usize],
    anchor: Option<usize>,
    seed: &[Vec<usize>],
    limits: SearchLimits,
    stats: &mut SearchStats,
) -> Result<Vec<Vec<usize>>, Stop> {
    let r = net.reaction_count();
    let classes = classify_nodes_within(net, kinetics, arcs.iter().copied());
    let mut label = vec![None; r];
    for node in &classes.nodes {
        if anchor.is_some_and(|y| y != node.complex) {
            continue;
        }
        for &q in &node.reactions {
            label[q] = node.cf_index_of(q);
        }
    }
    let mut cover = Cover { net, arcs, label, candidates: HashMap::new(), limits, truncated: false };
    let mut state = CoverState { comp: (0..r).collect(), covered: vec![false; r] };
    for group in seed {
        if !group.is_empty() && !cover.merge(&mut state, group) {
            return Err(Stop::Fail("the required groups already mix CF-subsets".into()));
        }
    }
    // Seed groups are not cycles; they fix grouping but not coverage.
    state.covered = vec![false; r];
    for group in seed {
        if is_cycle(net, group) {
            for &q in group {
                state.covered[q] = true;
            }
        }
    }
    match cover.search(state, stats) {
        Err(()) => Err(Stop::Limit(format!("more than {} search branches", limits.max_branches))),
        Ok(Some(done)) => {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &q in arcs {
                groups.entry(done.comp[q]).or_default().push(q);
            }
            Ok(canonical_blocks(groups.into_values().collect()))
        }
        Ok(None) if cover.truncated => {
            Err(Stop::Limit(format!("more than {} cycles through some reaction", limits.max_cycles)))
        }
        Ok(None) => Err(Stop::Fail("no partition into CF unions of cycles exists".into())),
    }
}

fn is_cycle(net: &Network, arcs: &[usize]) -> bool {
    !arcs.is_empty()
        && arcs.iter().enumerate().all(|(i, &a)| net.arcs()[a].1 == net.arcs()[arcs[(i + 1) % arcs.len()]].0)
}

fn shares_complex(net: &Network, a: &[usize], b: &[usize]) -> bool {
    let va: BTreeSet<usize> = a.iter().flat_map(|&q| [net.arcs()[q].0, net.arcs()[q].1]).collect();
    b.iter().any(|&q| va.contains(&net.arcs()[q].0) || va.contains(&net.arcs()[q].1))
}

/// One block per CF-subset of the anchor; pieces that avoid the anchor
/// join the first block they touch.
fn lump_by_anchor(net: &Network, node: &NodeClass, pieces: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); node.cf_count()];
    let mut floating = Vec::new();
    for piece in pieces {
        match piece.iter().find_map(|&q| node.cf_index_of(q)) {
            Some(i) => blocks[i].extend(piece),
            None => floating.push(piece),
        }
    }
    while !floating.is_empty() {
        let before = floating.len();
        floating.retain(|piece| match blocks.iter().position(|b| shares_complex(net, b, piece)) {
            Some(i) => {
                blocks[i].extend(piece.iter().copied());
                false
            }
            None => true,
        });
        if floating.len() == before {
            // Unreachable for a connected network; keep the pieces anyway.
            for piece in floating.drain(..) {
                blocks[0].extend(piece);
            }
        }
    }
    canonical_blocks(blocks)
}

/// Repeatedly merges the first pair of blocks that share a complex and
/// whose union is still CF.
fn lump_compatible(net: &Network, kinetics: &KineticOrderMatrix, mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    'outer: loop {
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if !shares_complex(net, &blocks[i], &blocks[j]) {
                    continue;
                }
                let union: Vec<usize> = blocks[i].iter().chain(&blocks[j]).copied().collect();
                if classify_nodes_within(net, kinetics, union.iter().copied()).nf_nodes().is_empty() {
                    blocks[i] = union;
                    blocks.remove(j);
                    continue 'outer;
                }
            }
        }
        break;
    }
    canonical_blocks(blocks)
}

// ---------------------------------------------------------- verification

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WrCfViolation {
    NotWeaklyReversible { block: usize },
    NotCf { block: usize, complex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WrCfCheck {
    pub valid: bool,
    pub violations: Vec<WrCfViolation>,
}

/// Checks that every block is weakly reversible and has no NF node.
pub fn verify_wr_cf(net: &Network, kinetics: &KineticOrderMatrix, d: &Decomposition) -> WrCfCheck {
    let mut violations = Vec::new();
    for (i, block) in d.blocks().iter().enumerate() {
        if !net.graph_of(block.iter().copied()).is_weakly_reversible() {
            violations.push(WrCfViolation::NotWeaklyReversible { block: i });
        }
        for complex in classify_nodes_within(net, kinetics, block.iter().copied()).nf_nodes() {
            violations.push(WrCfViolation::NotCf { block: i, complex });
        }
    }
    WrCfCheck { valid: violations.is_empty(), violations }
}
