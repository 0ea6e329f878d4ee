//! Undirected simple graphs with bitset adjacency rows.
//!
//! A single [`Graph`] type serves both as pattern (H, T; at most
//! [`PATTERN_CAP`] vertices) and as host (at most [`HOST_CAP`] vertices).
//! Values are immutable once built; the mutating helpers are only used while
//! constructing a graph.

mod canonical;
mod format;
mod structure;

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use canonical::{all_permutations, canonical_form, canonical_labeling, graph_from_mask};
pub use format::{parse_graph, serialize_graph, GraphFormat};
pub use structure::{connected_components, degeneracy_ordering, is_tree, ComponentPartition, VertexOrdering};

/// Largest pattern accepted by the factorial-cost routines.
pub const PATTERN_CAP: usize = 10;
/// Largest host graph accepted anywhere.
pub const HOST_CAP: usize = 65_536;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph { adj: (0..n).map(|_| FixedBitSet::with_capacity(n)).collect() }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > HOST_CAP {
            return Err(Error::UnsupportedSize(format!("{n} vertices exceeds host cap {HOST_CAP}")));
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::validation(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::validation(format!("self-loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::validation(format!("duplicate edge {u}-{v}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(0, n - 1);
        }
        g
    }

    /// The star K_{1,leaves} with centre 0.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    /// Returns a copy with `u`–`v` added (no-op if already present).
    pub fn with_edge(&self, u: usize, v: usize) -> Self {
        let mut g = self.clone();
        g.add_edge(u, v);
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].ones()
    }

    #[inline]
    pub fn row(&self, u: usize) -> &FixedBitSet {
        &self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones(..)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.adj[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn has_isolated_vertex(&self) -> bool {
        (0..self.n()).any(|u| self.adj[u].is_clear())
    }

    /// Rejects graphs that cannot serve as H or T.
    pub fn ensure_pattern(&self, role: &str) -> Result<()> {
        if let Some(v) = (0..self.n()).find(|&u| self.adj[u].is_clear()) {
            return Err(Error::validation(format!("pattern {role} has isolated vertex {v}")));
        }
        if self.n() > PATTERN_CAP {
            return Err(Error::UnsupportedSize(format!(
                "pattern {role} has {} vertices, cap is {PATTERN_CAP}",
                self.n()
            )));
        }
        Ok(())
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n());
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Subgraph induced by `keep`, relabelled to `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut g = Graph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Graph with the given vertices deleted, remaining vertices relabelled in index order.
    pub fn without_vertices(&self, removed: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.n()).filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    /// Appends isolated vertices until the graph has `n` vertices.
    pub fn padded(&self, n: usize) -> Self {
        let mut g = Graph::empty(n.max(self.n()));
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        g
    }

    /// Vertex-disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let off = self.n();
        let mut g = self.padded(off + other.n());
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off);
        }
        g
    }

    /// Stable 64-bit FNV-1a fingerprint of the labelled graph, used in reports.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        feed(self.n() as u64);
        for (u, v) in self.edges() {
            feed(((u as u64) << 32) | v as u64);
        }
        format!("{h:016x}")
    }
}

/// Serializes as a graph6 string.
impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&serialize_graph(self, GraphFormat::Graph6))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(matches!(Graph::from_edges(3, &[(0, 0)]), Err(Error::Validation(_))));
        assert!(matches!(Graph::from_edges(3, &[(0, 1), (1, 0)]), Err(Error::Validation(_))));
        assert!(matches!(Graph::from_edges(2, &[(0, 2)]), Err(Error::Validation(_))));
    }

    #[test]
    fn basic_families() {
        assert_eq!(Graph::complete(4).edge_count(), 6);
        assert_eq!(Graph::cycle(5).edge_count(), 5);
        assert_eq!(Graph::star(4).degree(0), 4);
        assert_eq!(Graph::path(4).edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn pattern_boundary() {
        assert!(Graph::path(3).ensure_pattern("H").is_ok());
        assert!(Graph::path(3).padded(4).ensure_pattern("H").is_err());
        assert!(matches!(Graph::path(11).ensure_pattern("H"), Err(Error::UnsupportedSize(_))));
    }

    #[test]
    fn without_vertices_relabels() {
        let g = Graph::path(3).without_vertices(&[1]);
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 0);
    }
}
