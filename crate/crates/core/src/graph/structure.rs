use std::collections::VecDeque;

use serde::Serialize;

use super::Graph;

/// Disjoint vertex sets covering all vertices, each inducing a connected
/// graph, sorted by smallest contained index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentPartition {
    pub parts: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part index of every vertex.
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut label = vec![usize::MAX; n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                label[v] = i;
            }
        }
        label
    }
}

/// A vertex ordering together with its back-degree bound: every vertex has at
/// most `bound` neighbours placed after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexOrdering {
    pub order: Vec<usize>,
    pub bound: usize,
}

impl VertexOrdering {
    /// `position[v]` is the index of `v` within `order`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Largest number of later neighbours of any vertex under `order`.
    pub fn later_degree(g: &Graph, order: &[usize]) -> usize {
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        (0..g.n())
            .map(|u| g.neighbors(u).filter(|&w| pos[w] > pos[u]).count())
            .max()
            .unwrap_or(0)
    }

    /// Checks that `order` is a permutation and the bound holds.
    pub fn verify(&self, g: &Graph) -> bool {
        let mut seen = vec![false; g.n()];
        if self.order.len() != g.n() {
            return false;
        }
        for &v in &self.order {
            if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        Self::later_degree(g, &self.order) <= self.bound
    }
}

pub fn connected_components(g: &Graph) -> ComponentPartition {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut part = Vec::new();
        while let Some(u) = queue.pop_front() {
            part.push(u);
            for w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    ComponentPartition { parts }
}

pub fn is_tree(g: &Graph) -> bool {
    g.n() > 0 && g.edge_count() == g.n() - 1 && connected_components(g).len() == 1
}

/// Exact degeneracy ordering by repeated removal of a minimum-degree vertex
/// (lowest index on ties). In removal order every vertex has at most `d`
/// neighbours that come after it, where `d` is the degeneracy.
pub fn degeneracy_ordering(g: &Graph) -> VertexOrdering {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    // bucket queue keyed by current degree
    let mut buckets: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); maxd + 1];
    for (u, &d) in deg.iter().enumerate() {
        buckets[d].insert(u);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut bound = 0;
    let mut lo = 0;
    for _ in 0..n {
        while buckets[lo].is_empty() {
            lo += 1;
        }
        let u = buckets[lo].pop_first().expect("nonempty bucket");
        bound = bound.max(lo);
        removed[u] = true;
        order.push(u);
        for w in g.neighbors(u) {
            if !removed[w] {
                buckets[deg[w]].remove(&w);
                deg[w] -= 1;
                buckets[deg[w]].insert(w);
                lo = lo.min(deg[w]);
            }
        }
    }
    VertexOrdering { order, bound }
}
