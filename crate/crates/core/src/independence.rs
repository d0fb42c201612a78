//! Independent decompositions via the coordinate graph.
//!
//! Fix a maximal independent set of reaction vectors (chosen greedily by
//! reaction index). Every other reaction vector is a unique combination of
//! the basis; basis vertices used together by some combination are joined
//! by an edge. Components of this graph, with each dependent reaction
//! attached to the component of its support, are the components of the
//! vector matroid — so the resulting decomposition is the finest
//! independent one and every independent decomposition coarsens it.

use petgraph::unionfind::UnionFind;

use crate::decomposition::{make_decomposition, Decomposition};
use crate::kinetics::KineticOrderMatrix;
use crate::linalg::{coordinates, rank, Matrix, Rational};
use crate::network::Network;
use crate::wrcf::{self, SearchError, SearchLimits, SearchMode, SearchStats, SearchStatus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dependency {
    pub reaction: usize,
    /// Coefficients on the basis vectors, in basis order.
    pub coefficients: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateGraph {
    /// Reactions whose vectors form the basis; vertex `i` is `basis[i]`.
    pub basis: Vec<usize>,
    pub dependencies: Vec<Dependency>,
    pub edges: Vec<(usize, usize)>,
    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub components: Vec<Vec<usize>>,
}

impl CoordinateGraph {
    pub fn vertex_count(&self) -> usize {
        self.basis.len()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }
}

pub fn coordinate_graph(net: &Network) -> CoordinateGraph {
    let vectors: Vec<Vec<Rational>> = (0..net.reaction_count()).map(|q| net.reaction_vector(q)).collect();
    let m = net.species_count();
    let mut basis: Vec<usize> = Vec::new();
    for (q, v) in vectors.iter().enumerate() {
        let mut rows: Vec<Vec<Rational>> = basis.iter().map(|&b| vectors[b].clone()).collect();
        rows.push(v.clone());
        let candidate = Matrix::from_rows(m, rows).expect("reaction vectors have species length");
        if rank(&candidate) > basis.len() {
            basis.push(q);
        }
    }
    let basis_vectors: Vec<Vec<Rational>> = basis.iter().map(|&b| vectors[b].clone()).collect();
    let p = basis.len();
    let mut dependencies = Vec::new();
    let mut edges = Vec::new();
    let mut uf = UnionFind::<usize>::new(p);
    for (q, v) in vectors.iter().enumerate() {
        if basis.contains(&q) {
            continue;
        }
        let coefficients = coordinates(&basis_vectors, v).expect("basis spans every reaction vector");
        let support: Vec<usize> = (0..p).filter(|&j| !num::Zero::is_zero(&coefficients[j])).collect();
        for (i, &a) in support.iter().enumerate() {
            for &b in &support[i + 1..] {
                edges.push((a, b));
                uf.union(a, b);
            }
        }
        dependencies.push(Dependency { reaction: q, coefficients });
    }
    edges.sort_unstable();
    edges.dedup();
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; p];
    for v in 0..p {
        let root = uf.find(v);
        if slot[root] == usize::MAX {
            slot[root] = components.len();
            components.push(Vec::new());
        }
        components[slot[root]].push(v);
    }
    CoordinateGraph { basis, dependencies, edges, components }
}

#[derive(Debug, Clone)]
pub struct FinestIndependent {
    pub decomposition: Decomposition,
    pub graph: CoordinateGraph,
    /// Coordinate-graph component → block index of `decomposition`.
    pub component_map: Vec<usize>,
}

impl FinestIndependent {
    pub fn is_trivial(&self) -> bool {
        self.decomposition.len() <= 1
    }
}

pub fn finest_independent(net: &Network) -> FinestIndependent {
    let graph = coordinate_graph(net);
    let mut vertex_component = vec![0; graph.vertex_count()];
    for (c, comp) in graph.components.iter().enumerate() {
        for &v in comp {
            vertex_component[v] = c;
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); graph.components.len()];
    for (v, &q) in graph.basis.iter().enumerate() {
        groups[vertex_component[v]].push(q);
    }
    for dep in &graph.dependencies {
        let v = dep.coefficients.iter().position(|c| !num::Zero::is_zero(c)).expect("reaction vectors are nonzero");
        groups[vertex_component[v]].push(dep.reaction);
    }
    let decomposition = make_decomposition(net, groups.clone()).expect("components partition the reactions");
    let component_map = groups
        .iter()
        .map(|g| decomposition.blocks().iter().position(|b| b.contains(&g[0])).expect("block exists"))
        .collect();
    FinestIndependent { decomposition, graph, component_map }
}

/// `Σ dim S_i = dim S` for the given blocks.
pub fn is_independent(net: &Network, blocks: &[Vec<usize>]) -> bool {
    let total: usize = blocks.iter().map(|b| net.stoichiometric_subspace_of(b).dim()).sum();
    total == net.rank()
}

#[derive(Debug, Clone)]
pub struct IndependentWrCf {
    pub status: SearchStatus,
    pub decomposition: Option<Decomposition>,
    /// The coarse WR CF-decomposition found by the unconstrained search, and
    /// whether it is independent.
    pub canonical: Option<Decomposition>,
    pub canonical_independent: Option<bool>,
    pub reason: Option<String>,
    pub stats: SearchStats,
}

/// An independent weakly reversible CF-decomposition, or proof that none
/// exists.
///
/// The coarse decomposition returned by the exhaustive search is tested
/// first. If it is dependent, the search is rerun with every block forced
/// to be a union of finest-independent blocks; independent decompositions
/// are exactly such coarsenings, so a negative answer there is conclusive.
pub fn independent_wr_cf(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    limits: SearchLimits,
) -> Result<IndependentWrCf, SearchError> {
    kinetics.check(net)?;
    let first = wrcf::wr_cf_search(net, kinetics, SearchMode::Exhaustive, limits)?;
    let mut stats = first.stats;
    let Some(canonical) = first.decomposition else {
        return Ok(IndependentWrCf {
            status: first.status,
            decomposition: None,
            canonical: None,
            canonical_independent: None,
            reason: first.reason,
            stats,
        });
    };
    if is_independent(net, canonical.blocks()) {
        return Ok(IndependentWrCf {
            status: SearchStatus::Found,
            decomposition: Some(canonical.clone()),
            canonical: Some(canonical),
            canonical_independent: Some(true),
            reason: None,
            stats,
        });
    }
    let finest = finest_independent(net);
    let second = wrcf::wr_cf_coarsening(net, kinetics, finest.decomposition.blocks(), limits)?;
    stats.cycles_enumerated += second.stats.cycles_enumerated;
    stats.branches += second.stats.branches;
    let reason = match second.status {
        SearchStatus::NotFoundProven => {
            Some("no weakly reversible CF-decomposition coarsens the finest independent decomposition".to_string())
        }
        _ => second.reason,
    };
    Ok(IndependentWrCf {
        status: second.status,
        decomposition: second.decomposition,
        canonical: Some(canonical),
        canonical_independent: Some(false),
        reason,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversible_pair_has_one_vertex() {
        let net = Network::builder().simple("r1", &["A"], &["B"]).simple("r2", &["B"], &["A"]).build().unwrap();
        let g = coordinate_graph(&net);
        assert_eq!(g.basis, vec![0]);
        assert!(g.edges.is_empty());
        assert!(finest_independent(&net).is_trivial());
    }

    #[test]
    fn disjoint_reactions_split() {
        let net = Network::builder().simple("r1", &["A"], &["B"]).simple("r2", &["C"], &["D"]).build().unwrap();
        let g = coordinate_graph(&net);
        assert_eq!(g.components, vec![vec![0], vec![1]]);
        assert_eq!(finest_independent(&net).decomposition.blocks(), &[vec![0], vec![1]]);
    }

    #[test]
    fn triangle_is_connected() {
        let net = Network::builder()
            .simple("r1", &["A"], &["B"])
            .simple("r2", &["B"], &["C"])
            .simple("r3", &["C"], &["A"])
            .build()
            .unwrap();
        let g = coordinate_graph(&net);
        assert_eq!(g.edges, vec![(0, 1)]);
        assert!(g.is_connected());
    }
}
