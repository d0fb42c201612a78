//! Decompositions: partitions of the reaction set and the subnetworks they
//! induce, with independence, incidence independence and common-complex
//! analysis.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::kinetics::{self, KineticOrderMatrix, KineticsError, RateVector};
use crate::network::{Network, NetworkSummary, Subnetwork};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("reaction {0} appears in more than one block")]
    Overlap(usize),
    #[error("reaction {0} is in no block")]
    Gap(usize),
    #[error("reaction index {index} out of range ({count} reactions)")]
    OutOfRange { index: usize, count: usize },
    #[error("block index {0} out of range or merged twice")]
    BadMerge(usize),
    #[error("unknown reaction label `{0}`")]
    UnknownLabel(String),
    #[error("internal consistency: {0}")]
    Inconsistent(String),
}

/// A partition of the reaction indices with the induced subnetworks.
#[derive(Clone)]
pub struct Decomposition {
    blocks: Vec<Vec<usize>>,
    subnetworks: Vec<Subnetwork>,
    summaries: Vec<NetworkSummary>,
}

impl std::fmt::Debug for Decomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_tuple("Decomposition").field(&self.blocks).finish()
    }
}

impl PartialEq for Decomposition {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

/// Sorts each block and orders blocks by their smallest reaction.
pub fn canonical_blocks(mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort_by_key(|b| b.first().copied().unwrap_or(usize::MAX));
    blocks
}

pub fn make_decomposition(net: &Network, blocks: Vec<Vec<usize>>) -> Result<Decomposition, DecompositionError> {
    let r = net.reaction_count();
    let mut owner = vec![usize::MAX; r];
    for (i, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(DecompositionError::EmptyBlock(i));
        }
        for &q in block {
            if q >= r {
                return Err(DecompositionError::OutOfRange { index: q, count: r });
            }
            if owner[q] != usize::MAX {
                return Err(DecompositionError::Overlap(q));
            }
            owner[q] = i;
        }
    }
    if let Some(q) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(DecompositionError::Gap(q));
    }
    let blocks = canonical_blocks(blocks);
    let subnetworks: Vec<Subnetwork> = blocks.iter().map(|b| net.subnetwork(b)).collect();
    let summaries = subnetworks.iter().map(|s| s.network.summarize()).collect();
    Ok(Decomposition { blocks, subnetworks, summaries })
}

/// Blocks given by reaction labels.
pub fn decomposition_from_labels<S: AsRef<str>, B: AsRef<[S]>>(
    net: &Network,
    blocks: &[B],
) -> Result<Decomposition, DecompositionError> {
    let mut out = Vec::new();
    for block in blocks {
        let mut b = Vec::new();
        for label in block.as_ref() {
            let q = net
                .reaction_index(label.as_ref())
                .ok_or_else(|| DecompositionError::UnknownLabel(label.as_ref().to_string()))?;
            b.push(q);
        }
        out.push(b);
    }
    make_decomposition(net, out)
}

pub fn trivial_decomposition(net: &Network) -> Decomposition {
    make_decomposition(net, vec![(0..net.reaction_count()).collect()]).expect("one block covers everything")
}

pub fn linkage_class_decomposition(net: &Network) -> Decomposition {
    let blocks = net.linkage_classes().into_iter().map(|c| c.reactions).collect();
    make_decomposition(net, blocks).expect("linkage classes partition the reactions")
}

impl Decomposition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn subnetworks(&self) -> &[Subnetwork] {
        &self.subnetworks
    }

    pub fn summaries(&self) -> &[NetworkSummary] {
        &self.summaries
    }

    /// Block index owning each reaction.
    pub fn owner(&self, reaction_count: usize) -> Vec<usize> {
        let mut owner = vec![usize::MAX; reaction_count];
        for (i, b) in self.blocks.iter().enumerate() {
            for &q in b {
                owner[q] = i;
            }
        }
        owner
    }

    /// Blocks as lists of reaction labels.
    pub fn labels(&self, net: &Network) -> Vec<Vec<String>> {
        self.blocks.iter().map(|b| b.iter().map(|&q| net.reaction(q).label.clone()).collect()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecompositionClass {
    /// No complex is shared by two blocks.
    #[serde(rename = "C")]
    C,
    /// Exactly one shared complex.
    #[serde(rename = "C*")]
    CStar,
    #[serde(rename = "neither")]
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionProfile {
    pub independent: bool,
    pub incidence_independent: bool,
    pub bi_independent: bool,
    pub weakly_reversible: bool,
    pub zero_deficiency: bool,
    pub common_complexes: Vec<usize>,
    pub class: DecompositionClass,
    pub rank: usize,
    pub block_ranks: Vec<usize>,
    pub n_minus_l: usize,
    pub block_n_minus_l: Vec<usize>,
    pub deficiency: usize,
    pub block_deficiencies: Vec<usize>,
}

impl DecompositionProfile {
    pub fn sum_block_deficiency(&self) -> usize {
        self.block_deficiencies.iter().sum()
    }
}

/// Independence flags, common complexes and the deficiency relation. The
/// inequalities `independent ⇒ δ ≤ Σδ_i` and `incidence independent ⇒
/// δ ≥ Σδ_i` are checked and a violation is reported as an error.
pub fn profile(net: &Network, d: &Decomposition) -> Result<DecompositionProfile, DecompositionError> {
    let summary = net.summarize();
    let block_ranks: Vec<usize> = d.summaries.iter().map(|s| s.rank).collect();
    let block_n_minus_l: Vec<usize> = d.summaries.iter().map(|s| s.complexes - s.linkage_classes).collect();
    let block_deficiencies: Vec<usize> = d.summaries.iter().map(|s| s.deficiency).collect();
    let n_minus_l = summary.complexes - summary.linkage_classes;
    let independent = block_ranks.iter().sum::<usize>() == summary.rank;
    let incidence_independent = block_n_minus_l.iter().sum::<usize>() == n_minus_l;

    let mut seen: Vec<usize> = vec![0; net.complex_count()];
    for sub in &d.subnetworks {
        for &c in &sub.complex_map {
            seen[c] += 1;
        }
    }
    let common_complexes: Vec<usize> = (0..net.complex_count()).filter(|&c| seen[c] >= 2).collect();
    let class = match common_complexes.len() {
        0 => DecompositionClass::C,
        1 => DecompositionClass::CStar,
        _ => DecompositionClass::Neither,
    };

    let sum_def: usize = block_deficiencies.iter().sum();
    let delta = summary.deficiency;
    if independent && delta > sum_def {
        return Err(DecompositionError::Inconsistent(format!(
            "independent decomposition with δ = {delta} > Σδ_i = {sum_def}"
        )));
    }
    if incidence_independent && delta < sum_def {
        return Err(DecompositionError::Inconsistent(format!(
            "incidence independent decomposition with δ = {delta} < Σδ_i = {sum_def}"
        )));
    }
    if class != DecompositionClass::Neither && !incidence_independent {
        return Err(DecompositionError::Inconsistent("C*-decomposition that is not incidence independent".into()));
    }

    Ok(DecompositionProfile {
        independent,
        incidence_independent,
        bi_independent: independent && incidence_independent,
        weakly_reversible: d.summaries.iter().all(|s| s.weakly_reversible),
        zero_deficiency: block_deficiencies.iter().all(|&x| x == 0),
        common_complexes,
        class,
        rank: summary.rank,
        block_ranks,
        n_minus_l,
        block_n_minus_l,
        deficiency: delta,
        block_deficiencies,
    })
}

/// Every block of `fine` lies inside some block of `coarse`.
pub fn is_coarsening(fine: &Decomposition, coarse: &Decomposition) -> bool {
    let sets: Vec<BTreeSet<usize>> = coarse.blocks.iter().map(|b| b.iter().copied().collect()).collect();
    fine.blocks.iter().all(|b| sets.iter().any(|s| b.iter().all(|q| s.contains(q))))
}

/// Merges the listed groups of block indices; other blocks are kept.
pub fn coarsen(net: &Network, d: &Decomposition, groups: &[Vec<usize>]) -> Result<Decomposition, DecompositionError> {
    let mut taken = vec![false; d.len()];
    let mut blocks = Vec::new();
    for group in groups {
        let mut merged = Vec::new();
        for &i in group {
            if i >= d.len() || taken[i] {
                return Err(DecompositionError::BadMerge(i));
            }
            taken[i] = true;
            merged.extend_from_slice(&d.blocks[i]);
        }
        if !merged.is_empty() {
            blocks.push(merged);
        }
    }
    for (i, b) in d.blocks.iter().enumerate() {
        if !taken[i] {
            blocks.push(b.clone());
        }
    }
    make_decomposition(net, blocks)
}

/// Residuals of the whole network and of each block at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCheck {
    pub whole_residual: f64,
    pub block_residuals: Vec<f64>,
    pub equilibrium_of_whole: bool,
    pub equilibrium_of_all_blocks: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumRelationReport {
    pub independent: bool,
    pub points: Vec<PointCheck>,
    /// No point equilibrates every block without equilibrating the whole.
    pub inclusion_holds: bool,
    /// Under independence: every whole-network equilibrium among the points
    /// also equilibrates every block. `None` when not independent.
    pub equality_holds: Option<bool>,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Spot-checks the relation between block equilibria and network
/// equilibria on supplied points: the intersection of block equilibrium
/// sets is always contained in the network's, with equality for
/// independent decompositions.
pub fn equilibria_relation_check(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    rates: &RateVector,
    d: &Decomposition,
    points: &[Vec<f64>],
    tolerance: f64,
) -> Result<EquilibriumRelationReport, KineticsError> {
    let independent = profile(net, d).map(|p| p.independent).unwrap_or(false);
    let mut checks = Vec::new();
    for x in points {
        let whole = max_abs(&kinetics::sfrf_eval(net, kinetics, rates, x)?);
        let mut block_residuals = Vec::new();
        for sub in &d.subnetworks {
            let f = kinetics.restrict(&sub.reaction_map);
            let k = rates.restrict(&sub.reaction_map);
            block_residuals.push(max_abs(&kinetics::sfrf_eval(&sub.network, &f, &k, x)?));
        }
        checks.push(PointCheck {
            whole_residual: whole,
            equilibrium_of_whole: whole < tolerance,
            equilibrium_of_all_blocks: block_residuals.iter().all(|&r| r < tolerance),
            block_residuals,
        });
    }
    let inclusion_holds = checks.iter().all(|c| !c.equilibrium_of_all_blocks || c.equilibrium_of_whole);
    let equality_holds =
        independent.then(|| checks.iter().all(|c| !c.equilibrium_of_whole || c.equilibrium_of_all_blocks));
    Ok(EquilibriumRelationReport { independent, points: checks, inclusion_holds, equality_holds })
}
