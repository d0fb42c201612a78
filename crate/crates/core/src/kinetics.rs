//! Power-law kinetics: kinetic order matrices, CF/NF node classification,
//! and evaluation of the species formation rate function.

use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{to_f64, Matrix, Rational};
use crate::network::Network;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KineticsError {
    #[error("kinetic order matrix is {rows}x{cols}, network needs {reactions}x{species}")]
    DimensionMismatch { rows: usize, cols: usize, reactions: usize, species: usize },
    #[error("rate vector has {found} entries, network has {expected} reactions")]
    RateLength { expected: usize, found: usize },
    #[error("rate constant {index} is not positive ({value})")]
    NonPositiveRate { index: usize, value: f64 },
    #[error("state vector has {found} entries, network has {expected} species")]
    StateLength { expected: usize, found: usize },
    #[error("state entry {index} is not positive ({value})")]
    NonPositiveState { index: usize, value: f64 },
    #[error("complex formation rate needs reactant-determined kinetics; complex {0} is an NF node")]
    NotReactantDetermined(usize),
}

/// Kinetic order matrix `F`: row `q` holds the exponents of reaction `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KineticOrderMatrix {
    matrix: Matrix,
}

impl KineticOrderMatrix {
    pub fn new(matrix: Matrix) -> Self {
        KineticOrderMatrix { matrix }
    }

    /// Mass-action kinetics: each row is the reactant complex.
    pub fn mass_action(net: &Network) -> Self {
        let rows = net.reactions().iter().map(|r| net.complex(r.reactant).to_vec()).collect();
        KineticOrderMatrix { matrix: Matrix::from_rows(net.species_count(), rows).expect("complex length") }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn row(&self, q: usize) -> &[Rational] {
        self.matrix.row(q)
    }

    pub fn reaction_count(&self) -> usize {
        self.matrix.rows()
    }

    /// Rows for the given reactions, in that order.
    pub fn restrict(&self, reactions: &[usize]) -> KineticOrderMatrix {
        KineticOrderMatrix { matrix: self.matrix.select_rows(reactions) }
    }

    pub fn check(&self, net: &Network) -> Result<(), KineticsError> {
        if self.matrix.rows() != net.reaction_count() || self.matrix.cols() != net.species_count() {
            return Err(KineticsError::DimensionMismatch {
                rows: self.matrix.rows(),
                cols: self.matrix.cols(),
                reactions: net.reaction_count(),
                species: net.species_count(),
            });
        }
        Ok(())
    }
}

/// Positive rate constants, one per reaction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateVector(Vec<f64>);

impl RateVector {
    pub fn new(values: Vec<f64>) -> Result<Self, KineticsError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v <= 0.0) {
            return Err(KineticsError::NonPositiveRate { index, value });
        }
        Ok(RateVector(values))
    }

    pub fn ones(len: usize) -> Self {
        RateVector(vec![1.0; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Result<Self, KineticsError> {
        RateVector::new(self.0.iter().map(|k| k * factor).collect())
    }

    pub fn restrict(&self, reactions: &[usize]) -> RateVector {
        RateVector(reactions.iter().map(|&q| self.0[q]).collect())
    }
}

/// Branching reactions of one reactant complex grouped by identical
/// kinetic-order rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeClass {
    pub complex: usize,
    pub reactions: Vec<usize>,
    /// CF-subsets, each ascending, ordered by their smallest reaction.
    pub cf_subsets: Vec<Vec<usize>>,
}

impl NodeClass {
    pub fn is_nf(&self) -> bool {
        self.cf_subsets.len() > 1
    }

    /// Number of CF-subsets, `N_R(y)`.
    pub fn cf_count(&self) -> usize {
        self.cf_subsets.len()
    }

    pub fn cf_index_of(&self, reaction: usize) -> Option<usize> {
        self.cf_subsets.iter().position(|s| s.contains(&reaction))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NfClassification {
    /// One entry per reactant complex, ascending by complex.
    pub nodes: Vec<NodeClass>,
}

impl NfClassification {
    pub fn node(&self, complex: usize) -> Option<&NodeClass> {
        self.nodes.iter().find(|n| n.complex == complex)
    }

    pub fn nf_nodes(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.is_nf()).map(|n| n.complex).collect()
    }

    /// `N_R(y)`, or 0 for a complex that is not a reactant.
    pub fn cf_count(&self, complex: usize) -> usize {
        self.node(complex).map_or(0, NodeClass::cf_count)
    }
}

/// Groups `reactions` by identical rows of `kinetics`, preserving the
/// order of first appearance.
pub fn group_by_rows(kinetics: &KineticOrderMatrix, reactions: &[usize]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &q in reactions {
        match groups.iter_mut().find(|g| kinetics.row(g[0]) == kinetics.row(q)) {
            Some(g) => g.push(q),
            None => groups.push(vec![q]),
        }
    }
    groups
}

pub fn classify_nodes(net: &Network, kinetics: &KineticOrderMatrix) -> Result<NfClassification, KineticsError> {
    kinetics.check(net)?;
    Ok(classify_nodes_within(net, kinetics, 0..net.reaction_count()))
}

/// Node classification restricted to a subset of reactions (a block).
/// A globally NF node may be CF inside a block.
pub fn classify_nodes_within(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    reactions: impl IntoIterator<Item = usize>,
) -> NfClassification {
    let mut by_reactant: Vec<Vec<usize>> = vec![Vec::new(); net.complex_count()];
    let mut reactions: Vec<usize> = reactions.into_iter().collect();
    reactions.sort_unstable();
    for q in reactions {
        by_reactant[net.reaction(q).reactant].push(q);
    }
    let nodes = by_reactant
        .into_iter()
        .enumerate()
        .filter(|(_, rs)| !rs.is_empty())
        .map(|(complex, reactions)| {
            let cf_subsets = group_by_rows(kinetics, &reactions);
            NodeClass { complex, reactions, cf_subsets }
        })
        .collect();
    NfClassification { nodes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KineticsKind {
    #[serde(rename = "PL-RDK")]
    PlRdk,
    #[serde(rename = "PL-NDK")]
    PlNdk,
}

impl std::fmt::Display for KineticsKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KineticsKind::PlRdk => "PL-RDK",
            KineticsKind::PlNdk => "PL-NDK",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemClass {
    pub kind: KineticsKind,
    pub nf_nodes: Vec<usize>,
    /// Every row equals its reactant complex.
    pub mass_action: bool,
    /// Reactions with different reactants never share a kinetic-order row
    /// (interaction span surjective; factor span surjective for PL-RDK).
    pub span_surjective: bool,
}

pub fn classify_system(net: &Network, kinetics: &KineticOrderMatrix) -> Result<SystemClass, KineticsError> {
    let nodes = classify_nodes(net, kinetics)?;
    let nf_nodes = nodes.nf_nodes();
    let mass_action = (0..net.reaction_count()).all(|q| kinetics.row(q) == net.complex(net.reaction(q).reactant));
    let mut span_surjective = true;
    'outer: for a in 0..net.reaction_count() {
        for b in a + 1..net.reaction_count() {
            if net.reaction(a).reactant != net.reaction(b).reactant && kinetics.row(a) == kinetics.row(b) {
                span_surjective = false;
                break 'outer;
            }
        }
    }
    Ok(SystemClass {
        kind: if nf_nodes.is_empty() { KineticsKind::PlRdk } else { KineticsKind::PlNdk },
        nf_nodes,
        mass_action,
        span_surjective,
    })
}

fn check_state(net: &Network, x: &[f64]) -> Result<(), KineticsError> {
    if x.len() != net.species_count() {
        return Err(KineticsError::StateLength { expected: net.species_count(), found: x.len() });
    }
    if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| v.is_nan() || **v <= 0.0) {
        return Err(KineticsError::NonPositiveState { index, value });
    }
    Ok(())
}

fn check_rates(net: &Network, k: &RateVector) -> Result<(), KineticsError> {
    if k.values().len() != net.reaction_count() {
        return Err(KineticsError::RateLength { expected: net.reaction_count(), found: k.values().len() });
    }
    Ok(())
}

/// `x^row = Π x_j^row_j`, evaluated as `exp(Σ row_j ln x_j)`.
pub fn monomial(row: &[Rational], log_x: &[f64]) -> f64 {
    row.iter().zip(log_x).filter(|(e, _)| !e.is_zero()).map(|(e, lx)| to_f64(e) * lx).sum::<f64>().exp()
}

/// Reaction rates `k_q · x^{F_q}`.
pub fn reaction_rates(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    k: &RateVector,
    x: &[f64],
) -> Result<Vec<f64>, KineticsError> {
    kinetics.check(net)?;
    check_rates(net, k)?;
    check_state(net, x)?;
    let log_x: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    Ok((0..net.reaction_count()).map(|q| k.values()[q] * monomial(kinetics.row(q), &log_x)).collect())
}

/// Species formation rate `f(x) = N · K(x)`.
pub fn sfrf_eval(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    k: &RateVector,
    x: &[f64],
) -> Result<Vec<f64>, KineticsError> {
    let rates = reaction_rates(net, kinetics, k, x)?;
    let n = net.stoichiometric_matrix();
    Ok((0..net.species_count())
        .map(|i| (0..net.reaction_count()).map(|q| to_f64(n.get(i, q)) * rates[q]).sum())
        .collect())
}

/// Complex formation rate `g(x) = I_a · diag(k) · ρ' · Ψ(x)` for
/// reactant-determined systems, indexed by complex.
pub fn cfr_eval(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    k: &RateVector,
    x: &[f64],
) -> Result<Vec<f64>, KineticsError> {
    let nodes = classify_nodes(net, kinetics)?;
    if let Some(nf) = nodes.nf_nodes().first() {
        return Err(KineticsError::NotReactantDetermined(*nf));
    }
    check_rates(net, k)?;
    check_state(net, x)?;
    let log_x: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    // Factor map: one interaction value per reactant complex.
    let mut factor = vec![0.0; net.complex_count()];
    for node in &nodes.nodes {
        factor[node.complex] = monomial(kinetics.row(node.reactions[0]), &log_x);
    }
    let mut g = vec![0.0; net.complex_count()];
    for (q, r) in net.reactions().iter().enumerate() {
        let flux = k.values()[q] * factor[r.reactant];
        g[r.reactant] -= flux;
        g[r.product] += flux;
    }
    Ok(g)
}
