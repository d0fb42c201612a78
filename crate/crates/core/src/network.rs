//! Chemical reaction networks: species, complexes, reactions, the matrices
//! `Y`, `I_a`, `N`, and the graph analytics built on them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::digraph::ArcGraph;
use crate::linalg::{self, format_rational, Matrix, Rational, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("species `{0}` declared twice")]
    DuplicateSpecies(String),
    #[error("reaction label `{0}` used twice")]
    DuplicateLabel(String),
    #[error("complexes {first} and {second} are identical")]
    DuplicateComplex { first: usize, second: usize },
    #[error("reaction `{0}` has identical reactant and product")]
    SelfLoop(String),
    #[error("reactions `{first}` and `{second}` join the same ordered pair of complexes")]
    DuplicateReaction { first: String, second: String },
    #[error("complex {0} takes part in no reaction")]
    OrphanComplex(usize),
    #[error("complex {complex} has a negative coefficient for species `{species}`")]
    NegativeCoefficient { complex: usize, species: String },
    #[error("complex {complex} has {found} coefficients, expected {expected}")]
    ComplexLength { complex: usize, expected: usize, found: usize },
    #[error("reaction `{label}` refers to complex {index}, but only {count} exist")]
    ComplexOutOfRange { label: String, index: usize, count: usize },
    #[error("species `{0}` is not declared")]
    UnknownSpecies(String),
    #[error("linkage class is not Eulerian")]
    NotEulerian,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reaction {
    pub label: String,
    pub reactant: usize,
    pub product: usize,
}

/// A chemical reaction network with its derived matrices.
///
/// `Y` is species × complexes, `I_a` is complexes × reactions (−1 at the
/// reactant, +1 at the product) and `N = Y · I_a`.
#[derive(Clone)]
pub struct Network {
    species: Vec<String>,
    complexes: Vec<Vec<Rational>>,
    reactions: Vec<Reaction>,
    arcs: Vec<(usize, usize)>,
    y: Matrix,
    incidence: Matrix,
    stoichiometric: Matrix,
}

/// Structural counts of a network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetworkSummary {
    pub species: usize,
    pub complexes: usize,
    pub reactions: usize,
    pub linkage_classes: usize,
    pub strong_linkage_classes: usize,
    pub terminal_strong_linkage_classes: usize,
    pub rank: usize,
    pub deficiency: usize,
    pub weakly_reversible: bool,
    pub t_minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkageClass {
    pub complexes: Vec<usize>,
    pub reactions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongClass {
    pub complexes: Vec<usize>,
    pub terminal: bool,
}

/// A network induced by a subset of reactions, with index maps back to the
/// parent. Species are kept, so subspaces live in the same ambient space.
#[derive(Clone)]
pub struct Subnetwork {
    pub network: Network,
    /// Sub complex index → parent complex index.
    pub complex_map: Vec<usize>,
    /// Sub reaction index → parent reaction index.
    pub reaction_map: Vec<usize>,
}

impl Network {
    /// Builds a network from dense complexes (one coefficient per species)
    /// and `(label, reactant, product)` triples.
    pub fn build(
        species: Vec<String>,
        complexes: Vec<Vec<Rational>>,
        reactions: Vec<(String, usize, usize)>,
    ) -> Result<Self, NetworkError> {
        Self::build_inner(species, complexes, reactions, false)
    }

    /// Like [`Network::build`] but allows negative entries in complexes.
    /// Kinetic complexes (rows of a kinetic order matrix) need this.
    pub fn build_signed(
        species: Vec<String>,
        complexes: Vec<Vec<Rational>>,
        reactions: Vec<(String, usize, usize)>,
    ) -> Result<Self, NetworkError> {
        Self::build_inner(species, complexes, reactions, true)
    }

    fn build_inner(
        species: Vec<String>,
        complexes: Vec<Vec<Rational>>,
        reactions: Vec<(String, usize, usize)>,
        allow_negative: bool,
    ) -> Result<Self, NetworkError> {
        let m = species.len();
        let mut seen_species = HashMap::new();
        for s in &species {
            if seen_species.insert(s.as_str(), ()).is_some() {
                return Err(NetworkError::DuplicateSpecies(s.clone()));
            }
        }
        let mut seen_complex: HashMap<&[Rational], usize> = HashMap::new();
        for (i, c) in complexes.iter().enumerate() {
            if c.len() != m {
                return Err(NetworkError::ComplexLength { complex: i, expected: m, found: c.len() });
            }
            if !allow_negative {
                if let Some(j) = c.iter().position(|x| x.is_negative()) {
                    return Err(NetworkError::NegativeCoefficient { complex: i, species: species[j].clone() });
                }
            }
            if let Some(&first) = seen_complex.get(c.as_slice()) {
                return Err(NetworkError::DuplicateComplex { first, second: i });
            }
            seen_complex.insert(c.as_slice(), i);
        }
        let n = complexes.len();
        let mut labels: HashMap<&str, ()> = HashMap::new();
        let mut pairs: HashMap<(usize, usize), &str> = HashMap::new();
        let mut used = vec![false; n];
        for (label, reactant, product) in &reactions {
            if labels.insert(label.as_str(), ()).is_some() {
                return Err(NetworkError::DuplicateLabel(label.clone()));
            }
            for &idx in [reactant, product] {
                if idx >= n {
                    return Err(NetworkError::ComplexOutOfRange { label: label.clone(), index: idx, count: n });
                }
            }
            if reactant == product {
                return Err(NetworkError::SelfLoop(label.clone()));
            }
            if let Some(first) = pairs.insert((*reactant, *product), label.as_str()) {
                return Err(NetworkError::DuplicateReaction { first: first.to_string(), second: label.clone() });
            }
            used[*reactant] = true;
            used[*product] = true;
        }
        if let Some(orphan) = used.iter().position(|u| !u) {
            return Err(NetworkError::OrphanComplex(orphan));
        }

        let r = reactions.len();
        let mut y = Matrix::zeros(m, n);
        for (j, c) in complexes.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                y.set(i, j, v.clone());
            }
        }
        let mut incidence = Matrix::zeros(n, r);
        for (q, (_, reactant, product)) in reactions.iter().enumerate() {
            incidence.set(*reactant, q, -Rational::one());
            incidence.set(*product, q, Rational::one());
        }
        let stoichiometric = y.mul(&incidence).expect("Y is m×n and I_a is n×r");
        let arcs = reactions.iter().map(|(_, a, b)| (*a, *b)).collect();
        let reactions =
            reactions.into_iter().map(|(label, reactant, product)| Reaction { label, reactant, product }).collect();
        Ok(Network { species, complexes, reactions, arcs, y, incidence, stoichiometric })
    }

    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    pub fn complexes(&self) -> &[Vec<Rational>] {
        &self.complexes
    }

    pub fn complex(&self, c: usize) -> &[Rational] {
        &self.complexes[c]
    }

    pub fn complex_index(&self, coefficients: &[Rational]) -> Option<usize> {
        self.complexes.iter().position(|c| c.as_slice() == coefficients)
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn reaction(&self, q: usize) -> &Reaction {
        &self.reactions[q]
    }

    pub fn reaction_index(&self, label: &str) -> Option<usize> {
        self.reactions.iter().position(|r| r.label == label)
    }

    /// `(reactant, product)` for every reaction, indexed by reaction.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn species_count(&self) -> usize {
        self.species.len()
    }

    pub fn complex_count(&self) -> usize {
        self.complexes.len()
    }

    pub fn reaction_count(&self) -> usize {
        self.reactions.len()
    }

    /// Molecularity matrix `Y` (species × complexes).
    pub fn y(&self) -> &Matrix {
        &self.y
    }

    /// Incidence matrix `I_a` (complexes × reactions).
    pub fn incidence(&self) -> &Matrix {
        &self.incidence
    }

    /// Stoichiometric matrix `N = Y · I_a` (species × reactions).
    pub fn stoichiometric_matrix(&self) -> &Matrix {
        &self.stoichiometric
    }

    /// Product minus reactant, over species.
    pub fn reaction_vector(&self, q: usize) -> Vec<Rational> {
        self.stoichiometric.column(q)
    }

    pub fn stoichiometric_subspace(&self) -> Subspace {
        linalg::column_space(&self.stoichiometric)
    }

    /// Stoichiometric subspace spanned by a subset of reactions.
    pub fn stoichiometric_subspace_of(&self, reactions: &[usize]) -> Subspace {
        Subspace::span(self.species_count(), reactions.iter().map(|&q| self.reaction_vector(q)).collect())
            .expect("reaction vectors have species length")
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.stoichiometric)
    }

    pub fn graph(&self) -> ArcGraph<'_> {
        ArcGraph::full(self.complex_count(), &self.arcs)
    }

    pub fn graph_of(&self, reactions: impl IntoIterator<Item = usize>) -> ArcGraph<'_> {
        ArcGraph::new(self.complex_count(), &self.arcs, reactions)
    }

    /// Reactions with `complex` as reactant (its branching reactions).
    pub fn reactions_from(&self, complex: usize) -> Vec<usize> {
        (0..self.reaction_count()).filter(|&q| self.arcs[q].0 == complex).collect()
    }

    /// Complexes that are the reactant of some reaction, ascending.
    pub fn reactant_complexes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.arcs.iter().map(|a| a.0).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Weakly connected components, ordered by smallest complex.
    pub fn linkage_classes(&self) -> Vec<LinkageClass> {
        self.graph()
            .weak_components()
            .into_iter()
            .map(|(complexes, reactions)| LinkageClass { complexes, reactions })
            .collect()
    }

    pub fn strong_components(&self) -> Vec<StrongClass> {
        self.graph()
            .strong_components()
            .into_iter()
            .map(|(complexes, terminal)| StrongClass { complexes, terminal })
            .collect()
    }

    pub fn is_weakly_reversible(&self) -> bool {
        self.graph().is_weakly_reversible()
    }

    /// Every complex is a reactant.
    pub fn is_cycle_terminal(&self) -> bool {
        self.reactant_complexes().len() == self.complex_count()
    }

    /// `(in-degree, out-degree)` of a complex in the reaction digraph.
    pub fn degree_profile(&self, complex: usize) -> (usize, usize) {
        let g = self.graph();
        (g.in_degree(complex), g.out_degree(complex))
    }

    /// A linkage class is Eulerian iff every vertex is balanced; it is
    /// connected by construction.
    pub fn is_eulerian(&self, class: &LinkageClass) -> bool {
        self.graph_of(class.reactions.iter().copied()).is_even()
    }

    /// Arc-disjoint simple cycles (as reaction index lists) partitioning the
    /// reactions of an Eulerian linkage class.
    pub fn eulerian_cycle_decomposition(&self, class: &LinkageClass) -> Result<Vec<Vec<usize>>, NetworkError> {
        self.graph_of(class.reactions.iter().copied()).cycle_decomposition().ok_or(NetworkError::NotEulerian)
    }

    pub fn summarize(&self) -> NetworkSummary {
        let g = self.graph();
        let l = g.weak_components().len();
        let strong = g.strong_components();
        let sl = strong.len();
        let t = strong.iter().filter(|(_, terminal)| *terminal).count();
        let s = self.rank();
        let n = self.complex_count();
        let delta = n - l - s;
        NetworkSummary {
            species: self.species_count(),
            complexes: n,
            reactions: self.reaction_count(),
            linkage_classes: l,
            strong_linkage_classes: sl,
            terminal_strong_linkage_classes: t,
            rank: s,
            deficiency: delta,
            weakly_reversible: sl == l,
            t_minimal: t == l,
        }
    }

    /// The subnetwork induced by `reactions` (parent indices, any order).
    /// Complexes are those appearing in the chosen reactions, in parent
    /// order; reactions keep parent order.
    pub fn subnetwork(&self, reactions: &[usize]) -> Subnetwork {
        let mut reaction_map = reactions.to_vec();
        reaction_map.sort_unstable();
        reaction_map.dedup();
        let mut complex_map: Vec<usize> = reaction_map.iter().flat_map(|&q| [self.arcs[q].0, self.arcs[q].1]).collect();
        complex_map.sort_unstable();
        complex_map.dedup();
        let local: HashMap<usize, usize> = complex_map.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let complexes = complex_map.iter().map(|&c| self.complexes[c].clone()).collect();
        let sub_reactions = reaction_map
            .iter()
            .map(|&q| {
                let r = &self.reactions[q];
                (r.label.clone(), local[&r.reactant], local[&r.product])
            })
            .collect();
        let network = Network::build_signed(self.species.clone(), complexes, sub_reactions)
            .expect("subnetwork of a valid network is valid");
        Subnetwork { network, complex_map, reaction_map }
    }

    /// Human-readable complex, e.g. `2A + B` or `0`.
    pub fn complex_label(&self, c: usize) -> String {
        format_combination(&self.species, &self.complexes[c])
    }

    pub fn reaction_display(&self, q: usize) -> String {
        let r = &self.reactions[q];
        format!("{}: {} -> {}", r.label, self.complex_label(r.reactant), self.complex_label(r.product))
    }
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Network")
            .field("species", &self.species)
            .field("reactions", &(0..self.reaction_count()).map(|q| self.reaction_display(q)).collect::<Vec<_>>())
            .finish()
    }
}

/// Formats a linear combination over species, omitting zero terms.
pub fn format_combination(species: &[String], coefficients: &[Rational]) -> String {
    let terms: Vec<String> = species
        .iter()
        .zip(coefficients)
        .filter(|(_, c)| !c.is_zero())
        .map(|(s, c)| if c.is_one() { s.clone() } else { format!("{} {}", format_rational(c), s) })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Builds networks from reactions given as species/coefficient lists.
/// Species are inferred in order of first appearance unless declared.
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    species: Vec<String>,
    declared: bool,
    reactions: Vec<(String, BTreeMap<String, Rational>, BTreeMap<String, Rational>)>,
}

impl NetworkBuilder {
    /// Fixes the species list and order. Reactions may then only use
    /// declared species.
    pub fn species<S: AsRef<str>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.species = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        self.declared = true;
        self
    }

    pub fn reaction<S: AsRef<str>>(
        mut self,
        label: &str,
        reactant: impl IntoIterator<Item = (S, Rational)>,
        product: impl IntoIterator<Item = (S, Rational)>,
    ) -> Self {
        let collect = |it: &mut dyn Iterator<Item = (S, Rational)>| {
            let mut map: BTreeMap<String, Rational> = BTreeMap::new();
            for (s, c) in it {
                *map.entry(s.as_ref().to_string()).or_insert_with(Rational::zero) += c;
            }
            map
        };
        let lhs = collect(&mut reactant.into_iter());
        let rhs = collect(&mut product.into_iter());
        self.reactions.push((label.to_string(), lhs, rhs));
        self
    }

    /// Shorthand for unit-coefficient complexes: `simple("r1", &["A"], &["B"])`.
    pub fn simple(self, label: &str, reactant: &[&str], product: &[&str]) -> Self {
        self.reaction(
            label,
            reactant.iter().map(|s| (*s, Rational::one())),
            product.iter().map(|s| (*s, Rational::one())),
        )
    }

    pub fn build(self) -> Result<Network, NetworkError> {
        let mut species = self.species.clone();
        for (_, lhs, rhs) in &self.reactions {
            for name in lhs.keys().chain(rhs.keys()) {
                if !species.iter().any(|s| s == name) {
                    if self.declared {
                        return Err(NetworkError::UnknownSpecies(name.clone()));
                    }
                    species.push(name.clone());
                }
            }
        }
        let index: HashMap<&str, usize> = species.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let dense = |map: &BTreeMap<String, Rational>| {
            let mut v = vec![Rational::zero(); species.len()];
            for (s, c) in map {
                v[index[s.as_str()]] = c.clone();
            }
            v
        };
        let mut complexes: Vec<Vec<Rational>> = Vec::new();
        let mut reactions = Vec::new();
        for (label, lhs, rhs) in &self.reactions {
            let mut idx = |v: Vec<Rational>| match complexes.iter().position(|c| *c == v) {
                Some(i) => i,
                None => {
                    complexes.push(v);
                    complexes.len() - 1
                }
            };
            let a = idx(dense(lhs));
            let b = idx(dense(rhs));
            reactions.push((label.clone(), a, b));
        }
        Network::build(species, complexes, reactions)
    }
}
