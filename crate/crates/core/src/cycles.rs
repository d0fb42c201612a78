//! Simple-cycle enumeration through a fixed vertex or a fixed arc.
//!
//! This is the circuit search of Johnson's algorithm run from a single root
//! on the whole graph: a vertex stays blocked while it cannot reach the root
//! without passing through the current path, which keeps the work
//! proportional to the number of cycles reported.

use crate::digraph::ArcGraph;

/// Cycles found by a rooted search, each an arc list starting at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleList {
    pub cycles: Vec<Vec<usize>>,
    /// The search stopped at the limit; `cycles` is incomplete.
    pub truncated: bool,
}

struct Search<'g, 'a> {
    graph: &'g ArcGraph<'a>,
    root: usize,
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    arc_stack: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    limit: usize,
    truncated: bool,
}

impl Search<'_, '_> {
    fn unblock(&mut self, v: usize) {
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                stack.extend(std::mem::take(&mut self.block_map[u]));
            }
        }
    }

    fn circuit(&mut self, v: usize) -> bool {
        let mut found = false;
        self.blocked[v] = true;
        for &a in self.graph.out_arcs(v) {
            if self.truncated {
                return found;
            }
            let w = self.graph.arc(a).1;
            if w == self.root {
                let mut cycle = self.arc_stack.clone();
                cycle.push(a);
                self.cycles.push(cycle);
                if self.cycles.len() >= self.limit {
                    self.truncated = true;
                }
                found = true;
            } else if !self.blocked[w] {
                self.arc_stack.push(a);
                if self.circuit(w) {
                    found = true;
                }
                self.arc_stack.pop();
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &a in self.graph.out_arcs(v) {
                let w = self.graph.arc(a).1;
                if !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        found
    }
}

/// All simple cycles through `root` whose first arc is accepted by
/// `first_arc`, as arc lists starting at `root`, sorted lexicographically.
pub fn cycles_from(graph: &ArcGraph<'_>, root: usize, first_arc: impl Fn(usize) -> bool, limit: usize) -> CycleList {
    let n = graph.vertex_count();
    let mut search = Search {
        graph,
        root,
        blocked: vec![false; n],
        block_map: vec![Vec::new(); n],
        arc_stack: Vec::new(),
        cycles: Vec::new(),
        limit: limit.max(1),
        truncated: false,
    };
    search.blocked[root] = true;
    for &a in graph.out_arcs(root) {
        if search.truncated {
            break;
        }
        if !first_arc(a) {
            continue;
        }
        let w = graph.arc(a).1;
        if w == root {
            continue;
        }
        // Blocking from a previous first arc only records "cannot reach root
        // avoiding the root", which stays valid for the next one.
        if search.blocked[w] {
            continue;
        }
        search.arc_stack.push(a);
        search.circuit(w);
        search.arc_stack.pop();
    }
    let mut cycles = search.cycles;
    cycles.sort();
    CycleList { cycles, truncated: search.truncated }
}

/// All simple cycles through vertex `root`.
pub fn cycles_through_vertex(graph: &ArcGraph<'_>, root: usize, limit: usize) -> CycleList {
    cycles_from(graph, root, |_| true, limit)
}

/// All simple cycles containing arc `arc`, each listed starting with it.
pub fn cycles_through_arc(graph: &ArcGraph<'_>, arc: usize, limit: usize) -> CycleList {
    let tail = graph.arc(arc).0;
    cycles_from(graph, tail, |a| a == arc, limit)
}
