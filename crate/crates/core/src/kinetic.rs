//! The network of kinetic complexes.
//!
//! For a cycle-terminal system each complex `y` contributes its distinct
//! kinetic-order rows as kinetic complexes, and each reaction `y → y'`
//! contributes every pair of kinetic complexes of `y` and `y'`. Kinetic
//! complexes are identified by their vectors across the whole network, so
//! two reactants sharing a row share a kinetic complex. Loops are dropped.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::Decomposition;
use crate::digraph::ArcGraph;
use crate::kinetics::{classify_nodes, classify_nodes_within, KineticOrderMatrix, KineticsError};
use crate::linalg::{Rational, Subspace};
use crate::network::{format_combination, Network, NetworkSummary};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KineticNetworkError {
    #[error(transparent)]
    Kinetics(#[from] KineticsError),
    #[error("complex {0} is not a reactant; kinetic complexes need a cycle-terminal network")]
    NotCycleTerminal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KineticReaction {
    pub source: usize,
    pub target: usize,
    /// Original reactions producing this pair, ascending.
    pub provenance: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KineticComplexNetwork {
    pub species: Vec<String>,
    /// Order vectors, in order of first appearance by reactant complex.
    pub complexes: Vec<Vec<Rational>>,
    /// Kinetic complexes of each original complex (`C̃(y)`).
    pub complexes_of: Vec<Vec<usize>>,
    pub reactions: Vec<KineticReaction>,
    /// Kinetic reactions of each original reaction (`R̃(q)`), loops excluded.
    pub reactions_of: Vec<Vec<usize>>,
    /// Original reactions all of whose kinetic pairs are loops.
    pub degenerate: Vec<usize>,
    pub summary: NetworkSummary,
    pub flux_space: Subspace,
}

impl KineticComplexNetwork {
    /// `δ_Ñ = ñ − l̃ − s̃`.
    pub fn deficiency(&self) -> usize {
        self.summary.deficiency
    }

    pub fn complex_label(&self, i: usize) -> String {
        format_combination(&self.species, &self.complexes[i])
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.reactions.iter().map(|r| (r.source, r.target)).collect()
    }
}

/// Counts of a digraph whose vertices are vectors: `n`, `l` (isolated
/// vertices count as classes), strong classes, terminal classes, `s`.
fn summarize_vectors(
    species: usize,
    complexes: &[Vec<Rational>],
    arcs: &[(usize, usize)],
) -> (NetworkSummary, Subspace) {
    let graph = ArcGraph::full(complexes.len(), arcs);
    let touched = graph.vertices().len();
    let isolated = complexes.len() - touched;
    let strong = graph.strong_components();
    let l = graph.weak_components().len() + isolated;
    let sl = strong.len() + isolated;
    let t = strong.iter().filter(|(_, terminal)| *terminal).count() + isolated;
    let vectors =
        arcs.iter().map(|&(a, b)| complexes[b].iter().zip(&complexes[a]).map(|(x, y)| x - y).collect()).collect();
    let flux = Subspace::span(species, vectors).expect("vectors have species length");
    let s = flux.dim();
    let n = complexes.len();
    let summary = NetworkSummary {
        species,
        complexes: n,
        reactions: arcs.len(),
        linkage_classes: l,
        strong_linkage_classes: sl,
        terminal_strong_linkage_classes: t,
        rank: s,
        deficiency: n - l - s,
        weakly_reversible: sl == l,
        t_minimal: t == l,
    };
    (summary, flux)
}

pub fn kinetic_network(
    net: &Network,
    kinetics: &KineticOrderMatrix,
) -> Result<KineticComplexNetwork, KineticNetworkError> {
    kinetics.check(net)?;
    if let Some(c) = (0..net.complex_count()).find(|&c| net.reactions_from(c).is_empty()) {
        return Err(KineticNetworkError::NotCycleTerminal(net.complex_label(c)));
    }
    Ok(build(net, kinetics, 0..net.reaction_count()))
}

fn build(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    reactions: impl IntoIterator<Item = usize>,
) -> KineticComplexNetwork {
    let reactions: Vec<usize> = reactions.into_iter().collect();
    let classes = classify_nodes_within(net, kinetics, reactions.iter().copied());
    let mut complexes: Vec<Vec<Rational>> = Vec::new();
    let mut complexes_of = vec![Vec::new(); net.complex_count()];
    for node in &classes.nodes {
        for subset in &node.cf_subsets {
            let row = kinetics.row(subset[0]);
            let idx = match complexes.iter().position(|c| c.as_slice() == row) {
                Some(i) => i,
                None => {
                    complexes.push(row.to_vec());
                    complexes.len() - 1
                }
            };
            complexes_of[node.complex].push(idx);
        }
    }
    let mut out: Vec<KineticReaction> = Vec::new();
    let mut reactions_of = vec![Vec::new(); net.reaction_count()];
    let mut degenerate = Vec::new();
    for &q in &reactions {
        let (y, y2) = net.arcs()[q];
        let mut any = false;
        for &a in &complexes_of[y] {
            for &b in &complexes_of[y2] {
                if a == b {
                    continue;
                }
                any = true;
                let idx = match out.iter().position(|r| r.source == a && r.target == b) {
                    Some(i) => {
                        out[i].provenance.push(q);
                        i
                    }
                    None => {
                        out.push(KineticReaction { source: a, target: b, provenance: vec![q] });
                        out.len() - 1
                    }
                };
                reactions_of[q].push(idx);
            }
        }
        if !any {
            degenerate.push(q);
        }
    }
    let arcs: Vec<(usize, usize)> = out.iter().map(|r| (r.source, r.target)).collect();
    let (summary, flux_space) = summarize_vectors(net.species_count(), &complexes, &arcs);
    KineticComplexNetwork {
        species: net.species().to_vec(),
        complexes,
        complexes_of,
        reactions: out,
        reactions_of,
        degenerate,
        summary,
        flux_space,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReactionCount {
    pub reaction: usize,
    /// `N_R(y) · N_R(y') − |C̃(y) ∩ C̃(y')|`.
    pub expected: usize,
    pub actual: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KineticCountReport {
    /// `|C̃(y)| = N_R(y)` for every complex.
    pub complexes_match: bool,
    pub per_reaction: Vec<ReactionCount>,
    pub per_reaction_match: bool,
    pub n_tilde: usize,
    /// `Σ_y N_R(y)`.
    pub n_bound: usize,
    pub r_tilde: usize,
    /// `Σ_{y→y'} N_R(y) N_R(y')`.
    pub r_bound: usize,
    pub l: usize,
    pub l_tilde: usize,
    /// Interaction span surjective: distinct reactants never share a row.
    pub span_surjective: bool,
    /// Bounds hold, and are equalities (with `l = l̃`) under span
    /// surjectivity.
    pub bounds_hold: bool,
}

pub fn kinetic_counts_check(
    net: &Network,
    kinetics: &KineticOrderMatrix,
) -> Result<KineticCountReport, KineticNetworkError> {
    let kn = kinetic_network(net, kinetics)?;
    let classes = classify_nodes(net, kinetics)?;
    let nr = |c: usize| classes.cf_count(c);
    let complexes_match = (0..net.complex_count()).all(|c| kn.complexes_of[c].len() == nr(c));
    let per_reaction: Vec<ReactionCount> = (0..net.reaction_count())
        .map(|q| {
            let (y, y2) = net.arcs()[q];
            let a: BTreeSet<usize> = kn.complexes_of[y].iter().copied().collect();
            let common = kn.complexes_of[y2].iter().filter(|c| a.contains(c)).count();
            ReactionCount { reaction: q, expected: nr(y) * nr(y2) - common, actual: kn.reactions_of[q].len() }
        })
        .collect();
    let per_reaction_match = per_reaction.iter().all(|c| c.expected == c.actual);
    let n_bound: usize = (0..net.complex_count()).map(nr).sum();
    let r_bound: usize = net.arcs().iter().map(|&(y, y2)| nr(y) * nr(y2)).sum();
    let span_surjective = crate::kinetics::classify_system(net, kinetics)?.span_surjective;
    let l = net.linkage_classes().len();
    let l_tilde = kn.summary.linkage_classes;
    let n_tilde = kn.summary.complexes;
    let r_tilde = kn.summary.reactions;
    let mut bounds_hold = n_tilde <= n_bound && r_tilde <= r_bound;
    if span_surjective {
        bounds_hold &= n_tilde == n_bound && r_tilde == r_bound && l == l_tilde;
    }
    Ok(KineticCountReport {
        complexes_match,
        per_reaction,
        per_reaction_match,
        n_tilde,
        n_bound,
        r_tilde,
        r_bound,
        l,
        l_tilde,
        span_surjective,
        bounds_hold,
    })
}

/// The relations that must hold for a bi-independent decomposition into
/// factor span surjective blocks with `dim S_i = dim S̃_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedIdentities {
    pub hypotheses_hold: bool,
    pub n_minus_l_match: bool,
    pub rank_match: bool,
    pub deficiency_match: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedDecomposition {
    pub blocks: Vec<KineticComplexNetwork>,
    /// The union `Ñ_D`, over its own kinetic-complex indexing.
    pub union: KineticComplexNetwork,
    /// Each kinetic reaction of the union comes from exactly one block.
    pub is_decomposition: bool,
    pub bi_level_independent: Option<bool>,
    pub bi_level_weakly_reversible: Option<bool>,
    pub bi_level_bi_independent: Option<bool>,
    /// `dim S_i = dim S̃_i` for every block.
    pub equal_block_ranks: bool,
    pub identities: InducedIdentities,
}

impl InducedDecomposition {
    pub fn n_d(&self) -> usize {
        self.union.summary.complexes
    }

    pub fn l_d(&self) -> usize {
        self.union.summary.linkage_classes
    }

    pub fn s_d(&self) -> usize {
        self.union.summary.rank
    }

    pub fn deficiency_d(&self) -> usize {
        self.union.summary.deficiency
    }
}

/// Builds `Ñ_i` from the reactions of each block and their union `Ñ_D`.
/// Blocks that are not cycle terminal are an error.
pub fn induced_decomposition(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    d: &Decomposition,
) -> Result<InducedDecomposition, KineticNetworkError> {
    kinetics.check(net)?;
    let mut blocks = Vec::new();
    for block in d.blocks() {
        let reactants: BTreeSet<usize> = block.iter().map(|&q| net.arcs()[q].0).collect();
        if let Some(&c) =
            block.iter().flat_map(|&q| [net.arcs()[q].0, net.arcs()[q].1]).find(|c| !reactants.contains(c)).as_ref()
        {
            return Err(KineticNetworkError::NotCycleTerminal(net.complex_label(c)));
        }
        blocks.push(build(net, kinetics, block.iter().copied()));
    }

    // Union over vectors.
    let mut complexes: Vec<Vec<Rational>> = Vec::new();
    let mut out: Vec<KineticReaction> = Vec::new();
    let mut owners: Vec<BTreeSet<usize>> = Vec::new();
    let index_of = |v: &Vec<Rational>, complexes: &mut Vec<Vec<Rational>>| match complexes.iter().position(|c| c == v) {
        Some(i) => i,
        None => {
            complexes.push(v.clone());
            complexes.len() - 1
        }
    };
    for (i, b) in blocks.iter().enumerate() {
        for r in &b.reactions {
            let s = index_of(&b.complexes[r.source], &mut complexes);
            let t = index_of(&b.complexes[r.target], &mut complexes);
            match out.iter().position(|x| x.source == s && x.target == t) {
                Some(j) => {
                    out[j].provenance.extend(&r.provenance);
                    out[j].provenance.sort_unstable();
                    owners[j].insert(i);
                }
                None => {
                    out.push(KineticReaction { source: s, target: t, provenance: r.provenance.clone() });
                    owners.push(BTreeSet::from([i]));
                }
            }
        }
        for c in &b.complexes {
            index_of(c, &mut complexes);
        }
    }
    let is_decomposition = owners.iter().all(|o| o.len() == 1);
    let arcs: Vec<(usize, usize)> = out.iter().map(|r| (r.source, r.target)).collect();
    let (summary, flux_space) = summarize_vectors(net.species_count(), &complexes, &arcs);
    let mut complexes_of = vec![Vec::new(); net.complex_count()];
    for b in &blocks {
        for (y, ks) in b.complexes_of.iter().enumerate() {
            for &k in ks {
                let idx = complexes.iter().position(|c| *c == b.complexes[k]).expect("union holds every block complex");
                if !complexes_of[y].contains(&idx) {
                    complexes_of[y].push(idx);
                }
            }
        }
    }
    let mut reactions_of = vec![Vec::new(); net.reaction_count()];
    for (j, r) in out.iter().enumerate() {
        for &q in &r.provenance {
            reactions_of[q].push(j);
        }
    }
    let degenerate = blocks.iter().flat_map(|b| b.degenerate.iter().copied()).collect();
    let union = KineticComplexNetwork {
        species: net.species().to_vec(),
        complexes,
        complexes_of,
        reactions: out,
        reactions_of,
        degenerate,
        summary: summary.clone(),
        flux_space,
    };

    let whole = net.summarize();
    let block_summaries = d.summaries();
    let equal_block_ranks = block_summaries.iter().zip(&blocks).all(|(s, b)| s.rank == b.summary.rank);
    let independent = block_summaries.iter().map(|s| s.rank).sum::<usize>() == whole.rank;
    let incidence_independent = block_summaries.iter().map(|s| s.complexes - s.linkage_classes).sum::<usize>()
        == whole.complexes - whole.linkage_classes;
    let induced_independent = blocks.iter().map(|b| b.summary.rank).sum::<usize>() == summary.rank;
    let induced_incidence_independent =
        blocks.iter().map(|b| b.summary.complexes - b.summary.linkage_classes).sum::<usize>()
            == summary.complexes - summary.linkage_classes;
    let weakly_reversible = block_summaries.iter().all(|s| s.weakly_reversible);
    let induced_weakly_reversible = blocks.iter().all(|b| b.summary.weakly_reversible);

    let (bi_level_independent, bi_level_weakly_reversible, bi_level_bi_independent) = if is_decomposition {
        (
            Some(independent && induced_independent),
            Some(weakly_reversible && induced_weakly_reversible),
            Some(independent && incidence_independent && induced_independent && induced_incidence_independent),
        )
    } else {
        (None, None, None)
    };

    let fsk = d.blocks().iter().all(|b| block_span_surjective(net, kinetics, b));
    let hypotheses_hold = is_decomposition && independent && incidence_independent && fsk && equal_block_ranks;
    let identities = InducedIdentities {
        hypotheses_hold,
        n_minus_l_match: summary.complexes - summary.linkage_classes == whole.complexes - whole.linkage_classes,
        rank_match: summary.rank == whole.rank,
        deficiency_match: summary.deficiency == whole.deficiency,
    };

    Ok(InducedDecomposition {
        blocks,
        union,
        is_decomposition,
        bi_level_independent,
        bi_level_weakly_reversible,
        bi_level_bi_independent,
        equal_block_ranks,
        identities,
    })
}

/// Reactant-determined within the block and no two reactants share a row.
fn block_span_surjective(net: &Network, kinetics: &KineticOrderMatrix, block: &[usize]) -> bool {
    let classes = classify_nodes_within(net, kinetics, block.iter().copied());
    if !classes.nf_nodes().is_empty() {
        return false;
    }
    let rows: Vec<&[Rational]> = classes.nodes.iter().map(|n| kinetics.row(n.reactions[0])).collect();
    rows.iter().enumerate().all(|(i, a)| rows[i + 1..].iter().all(|b| a != b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::linkage_class_decomposition;

    #[test]
    fn mass_action_kinetic_network_mirrors_the_network() {
        let net = Network::builder()
            .simple("r1", &["A"], &["B"])
            .simple("r2", &["B"], &["A"])
            .simple("r3", &["C"], &["D"])
            .simple("r4", &["D"], &["C"])
            .build()
            .unwrap();
        let f = KineticOrderMatrix::mass_action(&net);
        let kn = kinetic_network(&net, &f).unwrap();
        assert_eq!(kn.complexes, net.complexes());
        assert_eq!(kn.summary, net.summarize());
        let d = linkage_class_decomposition(&net);
        let induced = induced_decomposition(&net, &f, &d).unwrap();
        assert_eq!(induced.bi_level_independent, Some(true));
        assert_eq!(induced.bi_level_bi_independent, Some(true));
        assert!(induced.identities.hypotheses_hold && induced.identities.deficiency_match);
    }

    #[test]
    fn shared_rows_produce_a_loop() {
        // A and B both react with order 1 in A: the kinetic pair of A -> B
        // is a loop.
        let net = Network::builder().simple("r1", &["A"], &["B"]).simple("r2", &["B"], &["A"]).build().unwrap();
        let mut f = KineticOrderMatrix::mass_action(&net).matrix().clone();
        f.set(1, 0, crate::linalg::int(1));
        f.set(1, 1, crate::linalg::int(0));
        let kn = kinetic_network(&net, &KineticOrderMatrix::new(f)).unwrap();
        assert_eq!(kn.summary.complexes, 1);
        assert_eq!(kn.degenerate, vec![0, 1]);
        assert!(kn.reactions.is_empty());
    }

    #[test]
    fn non_cycle_terminal_is_rejected() {
        let net = Network::builder().simple("r1", &["A"], &["B"]).build().unwrap();
        let err = kinetic_network(&net, &KineticOrderMatrix::mass_action(&net)).unwrap_err();
        assert!(matches!(err, KineticNetworkError::NotCycleTerminal(_)));
    }
}
