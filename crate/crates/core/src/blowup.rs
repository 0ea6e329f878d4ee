//! `(U, t)`-blow-ups of a pattern and the exponent `r(H, T)`.
//!
//! The exponent is the largest number of components of `H \ U` over the
//! subsets `U` whose `(U, |T|)`-blow-up of `H` is `T`-free; it is the growth
//! exponent of `Ex(n, H, T)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components, is_tree, Graph};
use crate::subgraph::contains_copy;

/// The `(U, t)`-blow-up together with the projection back to `H`.
///
/// Vertices are numbered with `U` first (index order), then copies `1..=t`,
/// each listing `V(H) \ U` in index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupResult {
    pub graph: Graph,
    /// `phi[x]` is the vertex of `H` that blow-up vertex `x` corresponds to.
    pub phi: Vec<usize>,
    /// Copy number in `1..=t`; identified `U`-vertices carry 0.
    pub copy_index: Vec<usize>,
    pub u: Vec<usize>,
    pub t: usize,
    pub h: usize,
}

impl BlowupResult {
    /// Blow-up vertex representing `H`-vertex `v` in copy `copy` (ignored for `U`-vertices).
    pub fn vertex(&self, v: usize, copy: usize) -> usize {
        match self.u.binary_search(&v) {
            Ok(i) => i,
            Err(below) => self.u.len() + (copy - 1) * (self.h - self.u.len()) + v - below,
        }
    }

    /// Vertices of `U` together with copy `copy`, indexed by `H`-vertex.
    pub fn copy_map(&self, copy: usize) -> Vec<usize> {
        (0..self.h).map(|v| self.vertex(v, copy)).collect()
    }
}

fn check_subset(h: usize, u: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = u.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != u.len() {
        return Err(Error::validation("U contains repeated vertices"));
    }
    if let Some(&bad) = sorted.iter().find(|&&v| v >= h) {
        return Err(Error::validation(format!("U contains {bad}, not a vertex of H (h = {h})")));
    }
    Ok(sorted)
}

pub fn blow_up(h_graph: &Graph, u: &[usize], t: usize) -> Result<BlowupResult> {
    if t == 0 {
        return Err(Error::validation("blow-up needs t >= 1"));
    }
    if h_graph.has_isolated_vertex() {
        return Err(Error::validation("H has an isolated vertex"));
    }
    let h = h_graph.n();
    let u = check_subset(h, u)?;
    let rest: Vec<usize> = (0..h).filter(|v| !u.contains(v)).collect();
    let n = u.len() + t * rest.len();
    if n > crate::graph::HOST_CAP {
        return Err(Error::UnsupportedSize(format!("blow-up would have {n} vertices")));
    }

    // index[v] = position among U (for U-vertices) or among the rest
    let mut in_u = vec![false; h];
    let mut index = vec![0; h];
    for (i, &v) in u.iter().enumerate() {
        in_u[v] = true;
        index[v] = i;
    }
    for (i, &v) in rest.iter().enumerate() {
        index[v] = i;
    }
    let place = |v: usize, copy: usize| {
        if in_u[v] {
            index[v]
        } else {
            u.len() + (copy - 1) * rest.len() + index[v]
        }
    };

    let mut phi = Vec::with_capacity(n);
    let mut copy_index = Vec::with_capacity(n);
    phi.extend(u.iter().copied());
    copy_index.extend(std::iter::repeat_n(0, u.len()));
    for copy in 1..=t {
        phi.extend(rest.iter().copied());
        copy_index.extend(std::iter::repeat_n(copy, rest.len()));
    }

    let mut g = Graph::empty(n);
    for (a, b) in h_graph.edges() {
        if in_u[a] && in_u[b] {
            g.add_edge(place(a, 1), place(b, 1));
        } else {
            for copy in 1..=t {
                g.add_edge(place(a, copy), place(b, copy));
            }
        }
    }
    Ok(BlowupResult { graph: g, phi, copy_index, u, t, h })
}

/// Result of the exponent computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum ExponentProfile {
    Finite {
        r: usize,
        #[serde(rename = "witness_U")]
        witness: Vec<usize>,
        t_used: usize,
    },
    /// `H` contains `T`, so every `T`-free graph has no copy of `H`.
    Zero { t_used: usize },
}

impl ExponentProfile {
    pub fn r(&self) -> Option<usize> {
        match self {
            ExponentProfile::Finite { r, .. } => Some(*r),
            ExponentProfile::Zero { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            ExponentProfile::Finite { witness, .. } => Some(witness),
            ExponentProfile::Zero { .. } => None,
        }
    }

    pub fn t_used(&self) -> usize {
        match self {
            ExponentProfile::Finite { t_used, .. } | ExponentProfile::Zero { t_used } => *t_used,
        }
    }
}

pub(crate) fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn components_without(h_graph: &Graph, u: &[usize]) -> usize {
    connected_components(&h_graph.without_vertices(u)).len()
}

fn check_pair(h_graph: &Graph, tree: &Graph) -> Result<()> {
    tree.ensure_pattern("T")?;
    if !is_tree(tree) {
        return Err(Error::validation("T is not a tree"));
    }
    h_graph.ensure_pattern("H")
}

/// Computes `r(H, T)` with `t = |T|`.
///
/// Candidate sets are tried in decreasing order of the number of components
/// of `H \ U`, then increasing `|U|`, then lexicographically; the first set
/// whose blow-up is `T`-free is the witness.
pub fn exponent_r(h_graph: &Graph, tree: &Graph) -> Result<ExponentProfile> {
    check_pair(h_graph, tree)?;
    let t = tree.n();
    if contains_copy(h_graph, tree)?.is_some() {
        return Ok(ExponentProfile::Zero { t_used: t });
    }
    let h = h_graph.n();
    let mut candidates: Vec<(usize, Vec<usize>)> = (0u32..1 << h)
        .map(|mask| {
            let u = mask_to_vec(mask);
            (components_without(h_graph, &u), u)
        })
        .collect();
    candidates.sort_by(|(ca, ua), (cb, ub)| cb.cmp(ca).then(ua.len().cmp(&ub.len())).then(ua.cmp(ub)));
    for (r, u) in candidates {
        let b = blow_up(h_graph, &u, t)?;
        if contains_copy(&b.graph, tree)?.is_none() {
            return Ok(ExponentProfile::Finite { r, witness: u, t_used: t });
        }
    }
    // U = ∅ gives disjoint copies of a T-free H, which is T-free since T is connected.
    Err(Error::internal("no subset U yields a T-free blow-up"))
}

/// Outcome of [`verify_profile`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub reason: Option<String>,
}

impl Verdict {
    fn ok() -> Self {
        Verdict { valid: true, reason: None }
    }

    fn fail(reason: impl Into<String>) -> Self {
        Verdict { valid: false, reason: Some(reason.into()) }
    }
}

/// Re-derives a profile from scratch: the witness blow-up is `T`-free with
/// exactly `r` components left, and no subset with more components works.
pub fn verify_profile(h_graph: &Graph, tree: &Graph, profile: &ExponentProfile) -> Verdict {
    if let Err(e) = check_pair(h_graph, tree) {
        return Verdict::fail(e.to_string());
    }
    let t = tree.n();
    if profile.t_used() != t {
        return Verdict::fail(format!("t_used = {} but |T| = {t}", profile.t_used()));
    }
    let h_has_t = match contains_copy(h_graph, tree) {
        Ok(found) => found.is_some(),
        Err(e) => return Verdict::fail(e.to_string()),
    };
    let (r, witness) = match profile {
        ExponentProfile::Zero { .. } => {
            return if h_has_t { Verdict::ok() } else { Verdict::fail("status Zero but H is T-free") };
        }
        ExponentProfile::Finite { .. } if h_has_t => return Verdict::fail("status Finite but H contains T"),
        ExponentProfile::Finite { r, witness, .. } => (*r, witness),
    };
    let h = h_graph.n();
    if r > h {
        return Verdict::fail(format!("r = {r} exceeds |H| = {h}"));
    }
    let witness = match check_subset(h, witness) {
        Ok(w) => w,
        Err(e) => return Verdict::fail(e.to_string()),
    };
    let comps = components_without(h_graph, &witness);
    if comps != r {
        return Verdict::fail(format!("H \\ U has {comps} components, profile claims {r}"));
    }
    match blow_up(h_graph, &witness, t).and_then(|b| contains_copy(&b.graph, tree)) {
        Ok(None) => {}
        Ok(Some(_)) => return Verdict::fail(format!("the ({witness:?}, {t})-blow-up contains T")),
        Err(e) => return Verdict::fail(e.to_string()),
    }
    for mask in 0u32..1 << h {
        let u = mask_to_vec(mask);
        if components_without(h_graph, &u) <= r {
            continue;
        }
        match blow_up(h_graph, &u, t).and_then(|b| contains_copy(&b.graph, tree)) {
            Ok(Some(_)) => {}
            Ok(None) => {
                return Verdict::fail(format!("U = {u:?} leaves more than {r} components with a T-free blow-up"))
            }
            Err(e) => return Verdict::fail(e.to_string()),
        }
    }
    Verdict::ok()
}
