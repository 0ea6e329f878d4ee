use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcColour {
    Red,
    Blue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColouredArc {
    pub from: usize,
    pub to: usize,
    pub colour: ArcColour,
}

/// Both orientations of every edge of `H`, red on the surviving pairs and
/// blue elsewhere, with the strong components of the blue arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColouredDigraph {
    pub n: usize,
    pub arcs: Vec<ColouredArc>,
    /// Blue strong components, each sorted, ordered by smallest member.
    pub parts: Vec<Vec<usize>>,
    /// Arcs between distinct parts induced by blue arcs, as part indices.
    pub condensation: Vec<(usize, usize)>,
    /// `reach[v]`: bitmask of vertices with a blue path from `v` (including `v`).
    #[serde(skip)]
    reach: Vec<u32>,
    #[serde(skip)]
    part_of: Vec<usize>,
}

impl ColouredDigraph {
    pub fn colour(&self, from: usize, to: usize) -> Option<ArcColour> {
        self.arcs.iter().find(|a| a.from == from && a.to == to).map(|a| a.colour)
    }

    pub fn is_blue(&self, from: usize, to: usize) -> bool {
        self.colour(from, to) == Some(ArcColour::Blue)
    }

    /// Vertices reachable from `v` along blue arcs, `v` included.
    pub fn reach_mask(&self, v: usize) -> u32 {
        self.reach[v]
    }

    /// Vertices with a blue path to `w`, `w` included.
    pub fn reaching(&self, w: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.reach[v] >> w & 1 == 1).collect()
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    /// Parts with no incoming condensation arc.
    pub fn source_parts(&self) -> Vec<usize> {
        (0..self.parts.len()).filter(|&p| !self.condensation.iter().any(|&(_, q)| q == p)).collect()
    }
}

/// Builds the red/blue digraph; `red` must hold at most one orientation of each edge of `H`.
pub fn colour_digraph(h_graph: &Graph, red: &[(usize, usize)]) -> Result<ColouredDigraph> {
    let n = h_graph.n();
    if n > 32 {
        return Err(Error::UnsupportedSize(format!("digraph on {n} vertices")));
    }
    for (k, &(u, w)) in red.iter().enumerate() {
        if u >= n || w >= n || !h_graph.has_edge(u, w) {
            return Err(Error::validation(format!("red pair ({u},{w}) is not an edge of H")));
        }
        if red[..k].iter().any(|&(a, b)| (a, b) == (u, w) || (a, b) == (w, u)) {
            return Err(Error::validation(format!("edge {u}-{w} listed twice in the red set")));
        }
    }
    let mut arcs = Vec::with_capacity(2 * h_graph.edge_count());
    for (a, b) in h_graph.edges() {
        for (from, to) in [(a, b), (b, a)] {
            let colour = if red.contains(&(from, to)) { ArcColour::Red } else { ArcColour::Blue };
            arcs.push(ColouredArc { from, to, colour });
        }
    }
    arcs.sort_by_key(|a| (a.from, a.to));

    // transitive closure of the blue arcs; h is tiny
    let mut reach: Vec<u32> = (0..n).map(|v| 1 << v).collect();
    loop {
        let mut changed = false;
        for arc in arcs.iter().filter(|a| a.colour == ArcColour::Blue) {
            let merged = reach[arc.from] | reach[arc.to];
            if merged != reach[arc.from] {
                reach[arc.from] = merged;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut part_of = vec![usize::MAX; n];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if part_of[v] != usize::MAX {
            continue;
        }
        let part: Vec<usize> = (v..n).filter(|&w| reach[v] >> w & 1 == 1 && reach[w] >> v & 1 == 1).collect();
        for &w in &part {
            part_of[w] = parts.len();
        }
        parts.push(part);
    }
    let mut condensation: Vec<(usize, usize)> = arcs
        .iter()
        .filter(|a| a.colour == ArcColour::Blue && part_of[a.from] != part_of[a.to])
        .map(|a| (part_of[a.from], part_of[a.to]))
        .collect();
    condensation.sort_unstable();
    condensation.dedup();
    Ok(ColouredDigraph { n, arcs, parts, condensation, reach, part_of })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ASelection {
    pub a: Vec<usize>,
    pub w: Vec<usize>,
    pub u: Vec<usize>,
    pub reach_sum: usize,
}

fn covers(d: &ColouredDigraph, mask: u32) -> bool {
    let full = if d.n == 32 { u32::MAX } else { (1u32 << d.n) - 1 };
    (0..d.n).filter(|&v| mask >> v & 1 == 1).fold(0, |acc, v| acc | d.reach[v]) == full
}

fn reach_sum(d: &ColouredDigraph, mask: u32) -> usize {
    (0..d.n).filter(|&v| mask >> v & 1 == 1).map(|v| d.reach[v].count_ones() as usize).sum()
}

fn to_mask(vs: &[usize]) -> u32 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// Picks the lowest-indexed vertex of every source part of the blue
/// condensation, then re-checks reachability, minimality, reach-sum
/// maximality and the three structural properties by brute force.
pub fn select_a(d: &ColouredDigraph) -> Result<ASelection> {
    let sources = d.source_parts();
    let a: Vec<usize> = sources.iter().map(|&p| d.parts[p][0]).collect();
    let mut w: Vec<usize> = sources.iter().flat_map(|&p| d.parts[p].iter().copied()).collect();
    w.sort_unstable();
    let u: Vec<usize> = (0..d.n).filter(|v| !w.contains(v)).collect();
    let sel = ASelection { reach_sum: reach_sum(d, to_mask(&a)), a, w, u };
    verify_selection(d, &sel)?;
    Ok(sel)
}

/// Checks every property an [`ASelection`] promises; failures are internal errors.
pub fn verify_selection(d: &ColouredDigraph, sel: &ASelection) -> Result<()> {
    let fail = |what: &str| Err(Error::internal(format!("set A fails {what}: {sel:?}")));
    let a_mask = to_mask(&sel.a);
    if !covers(d, a_mask) {
        return fail("blue reachability of every vertex");
    }
    if d.n <= 16 {
        let (mut min_size, mut best_sum) = (usize::MAX, 0);
        for mask in 0u32..1 << d.n {
            if covers(d, mask) {
                let size = mask.count_ones() as usize;
                let sum = reach_sum(d, mask);
                if size < min_size {
                    (min_size, best_sum) = (size, sum);
                } else if size == min_size {
                    best_sum = best_sum.max(sum);
                }
            }
        }
        if sel.a.len() != min_size {
            return fail("minimality");
        }
        if sel.reach_sum != best_sum || reach_sum(d, a_mask) != best_sum {
            return fail("reach-sum maximality");
        }
    }
    let mut hit = vec![false; d.parts.len()];
    for &v in &sel.a {
        if std::mem::replace(&mut hit[d.part_of(v)], true) {
            return fail("at most one vertex per part");
        }
    }
    let in_w = |v: usize| sel.w.contains(&v);
    for arc in &d.arcs {
        if in_w(arc.from) && in_w(arc.to) && d.part_of(arc.from) != d.part_of(arc.to) {
            return fail("no arcs between distinct parts inside W");
        }
        if arc.colour == ArcColour::Blue && !in_w(arc.from) && in_w(arc.to) {
            return fail("no blue arcs from U to W");
        }
    }
    let expected_w: Vec<usize> = (0..d.n).filter(|&v| sel.a.iter().any(|&x| d.part_of(x) == d.part_of(v))).collect();
    if sel.w != expected_w || sel.u != (0..d.n).filter(|v| !sel.w.contains(v)).collect::<Vec<_>>() {
        return fail("W = parts meeting A, U = complement");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let d = colour_digraph(&Graph::path(2), &[(1, 0)]).unwrap();
        assert_eq!(d.colour(0, 1), Some(ArcColour::Blue));
        assert_eq!(d.colour(1, 0), Some(ArcColour::Red));
        assert_eq!(d.parts, vec![vec![0], vec![1]]);
    }

    #[test]
    fn all_blue_path_is_one_part() {
        let d = colour_digraph(&Graph::path(3), &[]).unwrap();
        assert_eq!(d.parts, vec![vec![0, 1, 2]]);
        assert!(d.condensation.is_empty());
    }

    #[test]
    fn blue_path_condenses_to_a_path() {
        let d = colour_digraph(&Graph::path(3), &[(1, 0), (2, 1)]).unwrap();
        assert_eq!(d.parts, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(d.condensation, vec![(0, 1), (1, 2)]);
        let s = select_a(&d).unwrap();
        assert_eq!((s.a, s.w, s.u, s.reach_sum), (vec![0], vec![0], vec![1, 2], 3));
    }

    #[test]
    fn all_red_star_gives_every_vertex_its_own_source() {
        // K_{1,3}: one orientation red per edge; the blue reverse arcs still exist
        let d = colour_digraph(&Graph::star(3), &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = select_a(&d).unwrap();
        assert_eq!(s.a, vec![1, 2, 3]);
        assert_eq!(s.u, vec![0]);
    }

    #[test]
    fn two_source_parts() {
        // blue 2-cycle 0<->1 and vertex 2 reachable only by red arcs from 1
        let g = Graph::path(3);
        let d = colour_digraph(&g, &[(1, 2)]).unwrap();
        assert_eq!(d.parts, vec![vec![0, 1], vec![2]]);
        let s = select_a(&d).unwrap();
        assert_eq!(s.a, vec![2]);
        assert_eq!(s.w, vec![2]);
        assert_eq!(s.u, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_red_sets() {
        assert!(matches!(colour_digraph(&Graph::path(3), &[(0, 2)]), Err(Error::Validation(_))));
        assert!(matches!(colour_digraph(&Graph::path(3), &[(0, 1), (1, 0)]), Err(Error::Validation(_))));
    }
}
