//! Reaction digraph views over arbitrary subsets of reactions.
//!
//! Vertices are complex indices and arcs are reaction indices of the parent
//! network, so results computed on a block can be compared directly with the
//! whole network.

use std::collections::BTreeSet;

use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;

/// A set of arcs over `vertex_count` vertices. Arc `i` goes from
/// `arcs[i].0` to `arcs[i].1`; only arcs listed in `active` are present.
#[derive(Debug, Clone)]
pub struct ArcGraph<'a> {
    vertex_count: usize,
    arcs: &'a [(usize, usize)],
    active: Vec<usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl<'a> ArcGraph<'a> {
    pub fn new(vertex_count: usize, arcs: &'a [(usize, usize)], active: impl IntoIterator<Item = usize>) -> Self {
        let mut active: Vec<usize> = active.into_iter().collect();
        active.sort_unstable();
        active.dedup();
        let mut out = vec![Vec::new(); vertex_count];
        let mut inc = vec![Vec::new(); vertex_count];
        for &a in &active {
            let (u, v) = arcs[a];
            out[u].push(a);
            inc[v].push(a);
        }
        ArcGraph { vertex_count, arcs, active, out, inc }
    }

    pub fn full(vertex_count: usize, arcs: &'a [(usize, usize)]) -> Self {
        ArcGraph::new(vertex_count, arcs, 0..arcs.len())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn active_arcs(&self) -> &[usize] {
        &self.active
    }

    pub fn arc(&self, a: usize) -> (usize, usize) {
        self.arcs[a]
    }

    /// Outgoing active arcs of `v`, ascending by arc index.
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// Vertices touched by at least one active arc, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.active.iter().flat_map(|&a| [self.arcs[a].0, self.arcs[a].1]).collect();
        set.into_iter().collect()
    }

    /// Weakly connected components (over touched vertices) as
    /// `(vertices, arcs)` pairs, ordered by smallest vertex.
    pub fn weak_components(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut uf = UnionFind::<usize>::new(self.vertex_count);
        for &a in &self.active {
            let (u, v) = self.arcs[a];
            uf.union(u, v);
        }
        let vertices = self.vertices();
        let mut comps: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut root_slot = vec![usize::MAX; self.vertex_count];
        for &v in &vertices {
            let root = uf.find(v);
            if root_slot[root] == usize::MAX {
                root_slot[root] = comps.len();
                comps.push((Vec::new(), Vec::new()));
            }
            comps[root_slot[root]].0.push(v);
        }
        for &a in &self.active {
            let root = uf.find(self.arcs[a].0);
            comps[root_slot[root]].1.push(a);
        }
        comps
    }

    /// Strongly connected components (over touched vertices), each sorted,
    /// ordered by smallest vertex, with a terminal flag (no active arc leaves
    /// the component).
    pub fn strong_components(&self) -> Vec<(Vec<usize>, bool)> {
        let vertices = self.vertices();
        let mut graph = DiGraph::<usize, ()>::new();
        let mut node = vec![NodeIndex::end(); self.vertex_count];
        for &v in &vertices {
            node[v] = graph.add_node(v);
        }
        for &a in &self.active {
            let (u, v) = self.arcs[a];
            graph.add_edge(node[u], node[v], ());
        }
        let mut comps: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&graph)
            .into_iter()
            .map(|c| {
                let mut vs: Vec<usize> = c.into_iter().map(|n| graph[n]).collect();
                vs.sort_unstable();
                vs
            })
            .collect();
        comps.sort_by_key(|c| c[0]);
        let mut comp_of = vec![usize::MAX; self.vertex_count];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut terminal = vec![true; comps.len()];
        for &a in &self.active {
            let (u, v) = self.arcs[a];
            if comp_of[u] != comp_of[v] {
                terminal[comp_of[u]] = false;
            }
        }
        comps.into_iter().zip(terminal).collect()
    }

    /// Every active arc joins two vertices of the same strong component.
    pub fn is_weakly_reversible(&self) -> bool {
        let comps = self.strong_components();
        let mut comp_of = vec![usize::MAX; self.vertex_count];
        for (i, (c, _)) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        self.active.iter().all(|&a| {
            let (u, v) = self.arcs[a];
            comp_of[u] == comp_of[v]
        })
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// In-degree equals out-degree at every vertex.
    pub fn is_even(&self) -> bool {
        (0..self.vertex_count).all(|v| self.in_degree(v) == self.out_degree(v))
    }

    /// Splits an even digraph into arc-disjoint simple cycles.
    ///
    /// A walk is traced from the smallest vertex with unused arcs, always
    /// taking the smallest unused arc. Whenever the walk revisits a vertex,
    /// the closed part is cut off as a simple cycle. Returns `None` when the
    /// graph is not even. Each cycle is listed starting at its smallest arc
    /// index; cycles are ordered by that first arc.
    pub fn cycle_decomposition(&self) -> Option<Vec<Vec<usize>>> {
        if !self.is_even() {
            return None;
        }
        let mut used = vec![false; self.arcs.len()];
        let mut next_out = vec![0usize; self.vertex_count];
        let mut cycles = Vec::new();
        let mut remaining = self.active.len();
        while remaining > 0 {
            let start = self
                .vertices()
                .into_iter()
                .find(|&v| self.out[v].iter().any(|&a| !used[a]))
                .expect("unused arcs remain");
            let mut path_vertices = vec![start];
            let mut path_arcs: Vec<usize> = Vec::new();
            let mut position = vec![usize::MAX; self.vertex_count];
            position[start] = 0;
            loop {
                let v = *path_vertices.last().unwrap();
                let Some(a) = self.next_unused(v, &used, &mut next_out) else {
                    // Even graphs only get stuck back at the walk's start
                    // with every arc of the current trail already cut.
                    debug_assert!(path_arcs.is_empty());
                    break;
                };
                used[a] = true;
                remaining -= 1;
                let w = self.arcs[a].1;
                path_arcs.push(a);
                if position[w] != usize::MAX {
                    let p = position[w];
                    let cycle: Vec<usize> = path_arcs.drain(p..).collect();
                    for u in path_vertices.drain(p + 1..) {
                        position[u] = usize::MAX;
                    }
                    cycles.push(rotate_to_min(cycle));
                    if path_arcs.is_empty() && self.out[w].iter().all(|&b| used[b]) {
                        break;
                    }
                } else {
                    position[w] = path_vertices.len();
                    path_vertices.push(w);
                }
            }
        }
        cycles.sort_by_key(|c| c[0]);
        Some(cycles)
    }

    fn next_unused(&self, v: usize, used: &[bool], next_out: &mut [usize]) -> Option<usize> {
        while next_out[v] < self.out[v].len() {
            let a = self.out[v][next_out[v]];
            if !used[a] {
                return Some(a);
            }
            next_out[v] += 1;
        }
        None
    }
}

fn rotate_to_min(mut cycle: Vec<usize>) -> Vec<usize> {
    if let Some((i, _)) = cycle.iter().enumerate().min_by_key(|(_, &a)| a) {
        cycle.rotate_left(i);
    }
    cycle
}
