//! Non-induced subgraph search: containment, injective homomorphism counts,
//! automorphisms, copy counts and copy enumeration.
//!
//! Pattern vertices are matched in BFS order from the highest-degree vertex
//! (component by component). Host candidates for each pattern vertex are the
//! intersection of the adjacency rows of the images of its already-placed
//! neighbours, optionally restricted to a label class, filtered by degree.

use std::ops::ControlFlow;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Injective edge-preserving map; `map[u]` is the host image of pattern vertex `u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Embedding(pub Vec<usize>);

impl Embedding {
    pub fn image(&self, u: usize) -> usize {
        self.0[u]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// True iff the map is injective and sends every pattern edge to a host edge.
    pub fn is_valid(&self, host: &Graph, pattern: &Graph) -> bool {
        if self.0.len() != pattern.n() || self.0.iter().any(|&v| v >= host.n()) {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(host.n());
        for &v in &self.0 {
            if seen.put(v) {
                return false;
            }
        }
        pattern.edges().all(|(a, b)| host.has_edge(self.0[a], self.0[b]))
    }
}

/// Partition of host vertices into one class per pattern vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelPartition {
    labels: Vec<usize>,
    #[serde(skip)]
    classes: Vec<FixedBitSet>,
}

impl LabelPartition {
    /// From a label per host vertex; every label must be below `h`.
    pub fn from_labels(h: usize, labels: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        let mut classes = vec![FixedBitSet::with_capacity(n); h];
        for (v, &l) in labels.iter().enumerate() {
            if l >= h {
                return Err(Error::validation(format!("vertex {v} has label {l}, expected < {h}")));
            }
            classes[l].insert(v);
        }
        Ok(LabelPartition { labels, classes })
    }

    /// From explicit classes `classes[u]` = V_u; they must be disjoint and cover `0..n`.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (u, class) in classes.iter().enumerate() {
            for &v in class {
                if v >= n {
                    return Err(Error::validation(format!("class {u} contains out-of-range vertex {v}")));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::validation(format!("vertex {v} appears in classes {} and {u}", labels[v])));
                }
                labels[v] = u;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::validation(format!("vertex {v} is not covered by any class")));
        }
        Self::from_labels(classes.len(), labels)
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class(&self, u: usize) -> &FixedBitSet {
        &self.classes[u]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn host_n(&self) -> usize {
        self.labels.len()
    }

    /// Rainbow condition: every pattern vertex lands in its own class.
    pub fn is_rainbow(&self, emb: &Embedding) -> bool {
        emb.0.iter().enumerate().all(|(u, &v)| self.labels[v] == u)
    }
}

/// A set of embeddings of one pattern into one host.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CopyFamily {
    pub embeddings: Vec<Embedding>,
    #[serde(skip)]
    pub partition: Option<Arc<LabelPartition>>,
    pub truncated: bool,
}

impl CopyFamily {
    pub fn new(embeddings: Vec<Embedding>, partition: Option<Arc<LabelPartition>>) -> Self {
        CopyFamily { embeddings, partition, truncated: false }
    }

    pub fn len(&self) -> usize {
        self.embeddings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embeddings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Embedding> {
        self.embeddings.iter()
    }

    /// Same partition, different members.
    pub fn with_embeddings(&self, embeddings: Vec<Embedding>) -> Self {
        CopyFamily { embeddings, partition: self.partition.clone(), truncated: false }
    }

    /// Union of the images of all copies, on the host's vertex set.
    pub fn union_graph(&self, host_n: usize, pattern: &Graph) -> Graph {
        let mut g = Graph::empty(host_n);
        for emb in &self.embeddings {
            for (a, b) in pattern.edges() {
                g.add_edge(emb.0[a], emb.0[b]);
            }
        }
        g
    }

    /// Validity of every member plus the rainbow condition when a partition is attached.
    pub fn check(&self, host: &Graph, pattern: &Graph) -> Result<()> {
        for emb in &self.embeddings {
            if !emb.is_valid(host, pattern) {
                return Err(Error::internal(format!("invalid embedding {:?}", emb.0)));
            }
            if let Some(p) = &self.partition {
                if !p.is_rainbow(emb) {
                    return Err(Error::internal(format!("embedding {:?} is not rainbow", emb.0)));
                }
            }
        }
        Ok(())
    }
}

/// Backtracking matcher for one (host, pattern) pair.
pub(crate) struct Matcher<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    order: Vec<usize>,
    // for each position, the earlier-placed pattern neighbours of order[pos]
    back: Vec<Vec<usize>>,
    classes: Option<&'a LabelPartition>,
    host_deg: Vec<usize>,
}

impl<'a> Matcher<'a> {
    pub(crate) fn new(host: &'a Graph, pattern: &'a Graph, classes: Option<&'a LabelPartition>) -> Self {
        let order = search_order(pattern);
        let mut pos = vec![0; pattern.n()];
        for (i, &u) in order.iter().enumerate() {
            pos[u] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &u)| pattern.neighbors(u).filter(|&w| pos[w] < i).collect())
            .collect();
        let host_deg = (0..host.n()).map(|v| host.degree(v)).collect();
        Matcher { host, pattern, order, back, classes, host_deg }
    }

    fn candidates(&self, pos: usize, map: &[usize], used: &FixedBitSet) -> FixedBitSet {
        let u = self.order[pos];
        let mut cand = match self.classes {
            Some(p) => p.class(u).clone(),
            None => {
                let mut all = FixedBitSet::with_capacity(self.host.n());
                all.insert_range(..);
                all
            }
        };
        for &w in &self.back[pos] {
            cand.intersect_with(self.host.row(map[w]));
        }
        cand.difference_with(used);
        let need = self.pattern.degree(u);
        if need > 0 {
            let weak: Vec<usize> = cand.ones().filter(|&v| self.host_deg[v] < need).collect();
            for v in weak {
                cand.set(v, false);
            }
        }
        cand
    }

    /// Depth-first enumeration; `visit` receives maps indexed by pattern vertex.
    pub(crate) fn for_each<F>(&self, mut visit: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let h = self.pattern.n();
        let mut map = vec![usize::MAX; h];
        let mut used = FixedBitSet::with_capacity(self.host.n());
        if h == 0 {
            let _ = visit(&map);
            return;
        }
        let _ = self.rec(0, &mut map, &mut used, &mut visit);
    }

    fn rec<F>(&self, pos: usize, map: &mut [usize], used: &mut FixedBitSet, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let u = self.order[pos];
        for v in self.candidates(pos, map, used).ones() {
            map[u] = v;
            if pos + 1 == self.order.len() {
                visit(map)?;
            } else {
                used.insert(v);
                let flow = self.rec(pos + 1, map, used, visit);
                used.set(v, false);
                flow?;
            }
        }
        map[u] = usize::MAX;
        ControlFlow::Continue(())
    }

    fn count_from(&self, pos: usize, map: &mut [usize], used: &mut FixedBitSet) -> u128 {
        let cand = self.candidates(pos, map, used);
        if pos + 1 == self.order.len() {
            return cand.count_ones(..) as u128;
        }
        let u = self.order[pos];
        let mut total = 0;
        for v in cand.ones() {
            map[u] = v;
            used.insert(v);
            total += self.count_from(pos + 1, map, used);
            used.set(v, false);
        }
        map[u] = usize::MAX;
        total
    }

    pub(crate) fn count(&self) -> u128 {
        let h = self.pattern.n();
        if h == 0 {
            return 1;
        }
        let first = self.candidates(0, &vec![usize::MAX; h], &FixedBitSet::with_capacity(self.host.n()));
        if h == 1 {
            return first.count_ones(..) as u128;
        }
        let roots: Vec<usize> = first.ones().collect();
        let branch = |v: usize| {
            let mut map = vec![usize::MAX; h];
            let mut used = FixedBitSet::with_capacity(self.host.n());
            map[self.order[0]] = v;
            used.insert(v);
            self.count_from(1, &mut map, &mut used)
        };
        if self.host.n() >= 64 {
            roots.into_par_iter().map(branch).sum()
        } else {
            roots.into_iter().map(branch).sum()
        }
    }
}

/// Pattern vertices in BFS order from the highest-degree vertex (lowest
/// index on ties), restarting in each remaining component.
fn search_order(pattern: &Graph) -> Vec<usize> {
    let n = pattern.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let root = (0..n)
            .filter(|&u| !seen[u])
            .max_by_key(|&u| (pattern.degree(u), std::cmp::Reverse(u)))
            .unwrap();
        seen[root] = true;
        let mut head = order.len();
        order.push(root);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for w in pattern.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

pub fn contains_copy(host: &Graph, pattern: &Graph) -> Result<Option<Embedding>> {
    pattern.ensure_pattern("pattern")?;
    let mut found = None;
    Matcher::new(host, pattern, None).for_each(|m| {
        found = Some(Embedding(m.to_vec()));
        ControlFlow::Break(())
    });
    Ok(found)
}

pub fn count_injective_homs(host: &Graph, pattern: &Graph) -> Result<BigUint> {
    pattern.ensure_pattern("pattern")?;
    Ok(BigUint::from(Matcher::new(host, pattern, None).count()))
}

pub fn automorphism_count(pattern: &Graph) -> Result<u64> {
    pattern.ensure_pattern("pattern")?;
    Ok(Matcher::new(pattern, pattern, None).count() as u64)
}

/// All automorphisms as vertex maps, in lexicographic order.
pub fn automorphisms(pattern: &Graph) -> Result<Vec<Vec<usize>>> {
    pattern.ensure_pattern("pattern")?;
    let mut out = Vec::new();
    Matcher::new(pattern, pattern, None).for_each(|m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out.sort_unstable();
    Ok(out)
}

/// Number of distinct (non-induced) copies of `pattern` in `host`.
pub fn count_copies(host: &Graph, pattern: &Graph) -> Result<BigUint> {
    let homs = count_injective_homs(host, pattern)?;
    let aut = BigUint::from(automorphism_count(pattern)?);
    if &homs % &aut != BigUint::from(0u32) {
        return Err(Error::internal(format!("{homs} injective maps not divisible by |Aut| = {aut}")));
    }
    Ok(homs / aut)
}

/// Enumerates copies, at most `cap` of them.
///
/// Without a partition each copy is represented by its lexicographically
/// smallest vertex map among automorphic variants. With a partition only
/// rainbow embeddings are listed; a rainbow copy has exactly one rainbow
/// embedding, so no further deduplication is needed.
pub fn list_copies(
    host: &Graph,
    pattern: &Graph,
    partition: Option<Arc<LabelPartition>>,
    cap: usize,
) -> Result<CopyFamily> {
    pattern.ensure_pattern("pattern")?;
    if let Some(p) = &partition {
        if p.host_n() != host.n() {
            return Err(Error::validation(format!(
                "partition covers {} vertices, host has {}",
                p.host_n(),
                host.n()
            )));
        }
        if p.class_count() != pattern.n() {
            return Err(Error::validation(format!(
                "partition has {} classes, pattern has {} vertices",
                p.class_count(),
                pattern.n()
            )));
        }
    }
    let auts = if partition.is_none() { automorphisms(pattern)? } else { Vec::new() };
    let mut embeddings = Vec::new();
    let mut truncated = false;
    Matcher::new(host, pattern, partition.as_deref()).for_each(|m| {
        let canonical = auts.iter().all(|sigma| {
            // compare m with m∘sigma lexicographically
            for (u, &s) in sigma.iter().enumerate() {
                match m[u].cmp(&m[s]) {
                    std::cmp::Ordering::Less => return true,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
            true
        });
        if !canonical {
            return ControlFlow::Continue(());
        }
        if embeddings.len() == cap {
            truncated = true;
            return ControlFlow::Break(());
        }
        embeddings.push(Embedding(m.to_vec()));
        ControlFlow::Continue(())
    });
    embeddings.sort_unstable();
    Ok(CopyFamily { embeddings, partition, truncated })
}

/// Every injective homomorphism (all automorphic variants), optionally restricted to a partition.
pub(crate) fn all_embeddings(host: &Graph, pattern: &Graph, partition: Option<&LabelPartition>) -> Vec<Embedding> {
    let mut out = Vec::new();
    Matcher::new(host, pattern, partition).for_each(|m| {
        out.push(Embedding(m.to_vec()));
        ControlFlow::Continue(())
    });
    out
}
