//! Canonical labelling of small graphs by branch-and-bound over vertex
//! orders.
//!
//! The canonical form is the lexicographically smallest graph6 string over
//! all relabellings. graph6 packs the upper triangle column by column, so a
//! vertex order fixes the string one column at a time and partial orders can
//! be compared against the best string found so far.

use super::format::{serialize_graph, GraphFormat};
use super::{Graph, PATTERN_CAP};
use crate::error::{Error, Result};

/// Canonical graph6 string.
pub fn canonical_form(g: &Graph) -> Result<String> {
    canonical_labeling(g).map(|(s, _)| s)
}

/// Canonical graph6 string and the relabelling `perm` (vertex `v` goes to
/// `perm[v]`) such that `g.permute(&perm)` encodes to that string.
pub fn canonical_labeling(g: &Graph) -> Result<(String, Vec<usize>)> {
    let n = g.n();
    if n > PATTERN_CAP {
        return Err(Error::UnsupportedSize(format!(
            "canonical form needs at most {PATTERN_CAP} vertices, got {n}"
        )));
    }
    let adj: Vec<u16> = (0..n)
        .map(|u| g.neighbors(u).fold(0u16, |m, v| m | (1 << v)))
        .collect();
    // u and v are twins when their neighbourhoods agree outside {u, v};
    // swapping twins is an automorphism, so only the lowest unused twin
    // needs to be tried at each position.
    let mut twin_below = vec![0u16; n];
    for v in 0..n {
        for u in 0..v {
            let mask = !((1u16 << u) | (1u16 << v));
            if adj[u] & mask == adj[v] & mask {
                twin_below[v] |= 1 << u;
            }
        }
    }

    let mut search = Search {
        n,
        adj: &adj,
        twin_below: &twin_below,
        order: Vec::with_capacity(n),
        cols: Vec::with_capacity(n),
        best_cols: Vec::new(),
        best_order: Vec::new(),
    };
    search.descend(0);

    let mut perm = vec![0; n];
    for (i, &v) in search.best_order.iter().enumerate() {
        perm[v] = i;
    }
    let canon = g.permute(&perm);
    Ok((serialize_graph(&canon, GraphFormat::Graph6), perm))
}

struct Search<'a> {
    n: usize,
    adj: &'a [u16],
    twin_below: &'a [u16],
    order: Vec<usize>,
    // cols[j] holds the bits x(0,j)..x(j-1,j), first bit most significant
    cols: Vec<u16>,
    best_cols: Vec<u16>,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, used: u16) {
        let j = self.order.len();
        if j == self.n {
            if self.best_order.is_empty() || self.cols < self.best_cols {
                self.best_cols.clone_from(&self.cols);
                self.best_order.clone_from(&self.order);
            }
            return;
        }
        let mut cands: Vec<(u16, usize)> = (0..self.n)
            .filter(|&v| used & (1 << v) == 0 && self.twin_below[v] & !used == 0)
            .map(|v| (self.column(v), v))
            .collect();
        cands.sort_unstable();
        for (col, v) in cands {
            self.cols.push(col);
            if self.best_order.is_empty() || self.cols[..] <= self.best_cols[..=j] {
                self.order.push(v);
                self.descend(used | (1 << v));
                self.order.pop();
            }
            self.cols.pop();
        }
    }

    fn column(&self, v: usize) -> u16 {
        let j = self.order.len();
        self.order
            .iter()
            .enumerate()
            .fold(0u16, |c, (i, &u)| c | (((self.adj[u] >> v) & 1) << (j - 1 - i)))
    }
}

/// Graph whose k-th graph6 bit (column order) is bit k of `mask`.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if mask >> k & 1 == 1 {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    g
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut p = cur.clone();
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
            next = Some(p);
        }
        Some(cur)
    })
}
