use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph};
use crate::subgraph::{CopyFamily, Embedding};

/// Constants above this many bits are refused; paper-scale constants grow
/// like a tower and are only representable for small patterns.
pub const CONSTANT_BIT_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantsMode {
    PaperScale,
    DeskScale,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcedureConfig {
    /// `|T|`: the loop runs until `t` nested families exist.
    pub t: usize,
    /// `c_1..c_{e(H)}`.
    #[serde(serialize_with = "serialize_constants")]
    pub constants: Vec<BigUint>,
    pub mode: ConstantsMode,
}

fn serialize_constants<S: serde::Serializer>(cs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(cs.iter().map(|c| c.to_str_radix(10)))
}

impl ProcedureConfig {
    /// `c_0 = t`, `c_i = t * (h * c_{i-1}^h + 1)`.
    pub fn paper_scale(h_graph: &Graph, t: usize) -> Result<Self> {
        let h = h_graph.n() as u32;
        let mut constants = Vec::with_capacity(h_graph.edge_count());
        let mut prev = BigUint::from(t);
        for i in 1..=h_graph.edge_count() {
            if prev.bits() * h as u64 > CONSTANT_BIT_CAP {
                return Err(Error::UnsupportedSize(format!(
                    "paper-scale constant c_{i} exceeds {CONSTANT_BIT_CAP} bits"
                )));
            }
            let next = BigUint::from(t) * (BigUint::from(h) * prev.pow(h) + 1u32);
            constants.push(next.clone());
            prev = next;
        }
        Ok(ProcedureConfig { t, constants, mode: ConstantsMode::PaperScale })
    }

    /// The same small constant `c` for every stage.
    pub fn desk_uniform(h_graph: &Graph, t: usize, c: u64) -> Self {
        ProcedureConfig { t, constants: vec![BigUint::from(c); h_graph.edge_count()], mode: ConstantsMode::DeskScale }
    }

    /// `c_{i}` for `i` in `0..=e(H)`, with `c_0 = t`.
    pub fn constant(&self, i: usize) -> BigUint {
        if i == 0 {
            BigUint::from(self.t)
        } else {
            self.constants[i - 1].clone()
        }
    }

    /// Paper scale needs the full recursion (hence strict growth); desk
    /// scale only needs positive, non-decreasing constants.
    pub fn validate(&self, h_graph: &Graph) -> Result<()> {
        let e = h_graph.edge_count();
        if self.t == 0 {
            return Err(Error::validation("t must be positive"));
        }
        if self.constants.len() != e {
            return Err(Error::validation(format!("expected {e} constants, got {}", self.constants.len())));
        }
        if self.constants.iter().any(|c| c.bits() > CONSTANT_BIT_CAP) {
            return Err(Error::UnsupportedSize(format!("constants are capped at {CONSTANT_BIT_CAP} bits")));
        }
        let h = h_graph.n() as u32;
        for i in 1..=e {
            let (prev, cur) = (self.constant(i - 1), self.constant(i));
            let ok = match self.mode {
                ConstantsMode::PaperScale => cur >= BigUint::from(self.t) * (BigUint::from(h) * prev.pow(h) + 1u32),
                ConstantsMode::DeskScale => cur >= BigUint::from(1u32) && (i == 1 || cur >= prev),
            };
            if !ok {
                return Err(Error::validation(format!("constant c_{i} = {cur} violates the {:?} ordering", self.mode)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Filter,
    Restrict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutcomeKind {
    Sparse,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BSize {
    pub edge: (usize, usize),
    pub size: usize,
    /// Copies of the current family incident with `B_e`.
    pub incident: usize,
}

/// One pass through the loop body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub i: usize,
    pub j: usize,
    pub branch: Branch,
    pub family_size: usize,
    pub kept: usize,
    /// Copies avoiding every `B_e`.
    pub avoiding: usize,
    pub b_sizes: Vec<BSize>,
    pub chosen_edge: Option<(usize, usize)>,
    /// `|E_i|` at the time of the step.
    pub red_count: usize,
    pub retention_ok: bool,
}

/// `|F| <= c_{l-1}^{h^2} * n^a` evaluated on the instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseCheck {
    pub a: usize,
    pub family_size: usize,
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub bound: BigUint,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProcedureOutcome {
    pub kind: OutcomeKind,
    pub l: usize,
    pub remaining_red: Vec<(usize, usize)>,
    /// `F_1..F_t` when structured; the single final family when sparse.
    pub families: Vec<CopyFamily>,
    pub trace: Vec<TraceStep>,
    pub sparse_check: Option<SparseCheck>,
}

impl ProcedureOutcome {
    /// One JSON document per loop iteration.
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|s| serde_json::to_string(s).expect("trace serializes") + "\n")
            .collect()
    }
}

fn saturating_u64(c: &BigUint) -> u64 {
    c.to_u64().unwrap_or(u64::MAX)
}

/// For each vertex `x` used at position `u`, the number of distinct
/// `f(w)` over copies with `f(u) = x`: its degree into `V_w` in the union of
/// the copies (the family is rainbow, so no other edges join those classes).
fn degrees_into(family: &[Embedding], u: usize, w: usize) -> BTreeMap<usize, usize> {
    let mut pairs: Vec<(usize, usize)> = family.iter().map(|f| (f.image(u), f.image(w))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let mut deg = BTreeMap::new();
    for (x, _) in pairs {
        *deg.entry(x).or_insert(0) += 1;
    }
    deg
}

/// Runs the refinement loop on a rainbow family `h1` whose copies all induce
/// the order `order_h` (earliest first) on `V(H)`.
pub fn refine_families(
    h_graph: &Graph,
    h1: &CopyFamily,
    order_h: &[usize],
    config: &ProcedureConfig,
) -> Result<ProcedureOutcome> {
    h_graph.ensure_pattern("H")?;
    config.validate(h_graph)?;
    let h = h_graph.n();
    let partition = h1.partition.clone().ok_or_else(|| Error::validation("family carries no label partition"))?;
    if h1.is_empty() {
        return Err(Error::validation("family is empty"));
    }
    let mut rank = vec![usize::MAX; h];
    for (p, &v) in order_h.iter().enumerate() {
        if v >= h || rank[v] != usize::MAX {
            return Err(Error::validation("order_h is not a permutation of V(H)"));
        }
        rank[v] = p;
    }
    if order_h.len() != h {
        return Err(Error::validation("order_h is not a permutation of V(H)"));
    }

    let e_count = h_graph.edge_count();
    let mut red: Vec<(usize, usize)> = h_graph
        .edges()
        .map(|(a, b)| if rank[a] > rank[b] { (a, b) } else { (b, a) })
        .collect();
    red.sort_unstable();

    let t = config.t;
    let (mut i, mut j) = (1, 1);
    // families H_i^(1), ..., H_i^(j) of the current stage
    let mut stage: Vec<Vec<Embedding>> = vec![h1.embeddings.clone()];
    let mut trace = Vec::new();
    while i <= e_count && j < t {
        let cur = stage.last().expect("stage is nonempty");
        let c = saturating_u64(&config.constant(i));
        let mut in_b: Vec<Vec<bool>> = Vec::with_capacity(red.len());
        let mut b_sizes = Vec::with_capacity(red.len());
        for &(u, w) in &red {
            let deg = degrees_into(cur, u, w);
            let mut mark = vec![false; partition.host_n()];
            let mut size = 0;
            for (&x, &d) in &deg {
                if d as u64 <= c {
                    mark[x] = true;
                    size += 1;
                }
            }
            let incident = cur.iter().filter(|f| mark[f.image(u)]).count();
            b_sizes.push(BSize { edge: (u, w), size, incident });
            in_b.push(mark);
        }
        let touches = |f: &Embedding| red.iter().zip(&in_b).any(|(&(u, _), mark)| mark[f.image(u)]);
        let avoid: Vec<Embedding> = cur.iter().filter(|f| !touches(f)).cloned().collect();
        let size = cur.len();
        if 2 * avoid.len() >= size {
            trace.push(TraceStep {
                i,
                j,
                branch: Branch::Filter,
                family_size: size,
                kept: avoid.len(),
                avoiding: avoid.len(),
                b_sizes,
                chosen_edge: None,
                red_count: red.len(),
                retention_ok: 2 * avoid.len() >= size,
            });
            stage.push(avoid);
            j += 1;
        } else {
            let pick = b_sizes
                .iter()
                .position(|b| 2 * red.len() * b.incident >= size)
                .ok_or_else(|| Error::internal("no red pair carries a 1/(2|E_i|) share of the family"))?;
            let (u, _) = red[pick];
            let mark = &in_b[pick];
            let kept: Vec<Embedding> = cur.iter().filter(|f| mark[f.image(u)]).cloned().collect();
            trace.push(TraceStep {
                i,
                j,
                branch: Branch::Restrict,
                family_size: size,
                kept: kept.len(),
                avoiding: avoid.len(),
                chosen_edge: Some(red[pick]),
                red_count: red.len(),
                retention_ok: 2 * red.len() * kept.len() >= size,
                b_sizes,
            });
            red.remove(pick);
            stage = vec![kept];
            i += 1;
            j = 1;
        }
    }

    let l = i;
    let wrap = |embs: Vec<Embedding>| h1.with_embeddings(embs);
    if l > e_count {
        let family = stage.swap_remove(0);
        let a = connected_components(h_graph).len();
        let bound = config.constant(l - 1).pow((h * h) as u32) * BigUint::from(partition.host_n()).pow(a as u32);
        let family_size = family.len();
        let holds = BigUint::from(family_size) <= bound;
        if !holds && config.mode == ConstantsMode::PaperScale {
            return Err(Error::validation(format!(
                "sparse counting bound fails: {family_size} copies > {bound}; the host's degeneracy exceeds c_{}",
                l - 1
            )));
        }
        Ok(ProcedureOutcome {
            kind: OutcomeKind::Sparse,
            l,
            remaining_red: red,
            families: vec![wrap(family)],
            trace,
            sparse_check: Some(SparseCheck { a, family_size, bound, holds }),
        })
    } else {
        if stage.len() != t || red.len() != e_count - (l - 1) {
            return Err(Error::internal("loop ended outside the termination dichotomy"));
        }
        Ok(ProcedureOutcome {
            kind: OutcomeKind::Structured,
            l,
            remaining_red: red,
            families: stage.into_iter().map(wrap).collect(),
            trace,
            sparse_check: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::blowup::blow_up;
    use crate::subgraph::{list_copies, LabelPartition};

    fn rainbow_family(g: &Graph, h_graph: &Graph, labels: Vec<usize>) -> CopyFamily {
        let p = Arc::new(LabelPartition::from_labels(h_graph.n(), labels).unwrap());
        list_copies(g, h_graph, Some(p), usize::MAX).unwrap()
    }

    fn assert_dichotomy(o: &ProcedureOutcome, e: usize, t: usize) {
        let sparse = o.kind == OutcomeKind::Sparse;
        assert_eq!(sparse, o.l == e + 1);
        assert_eq!(sparse, o.remaining_red.is_empty());
        if !sparse {
            assert_eq!(o.families.len(), t);
            assert_eq!(o.remaining_red.len(), e - (o.l - 1));
        }
        assert!(o.trace.len() <= (e + 1) * t);
        assert!(o.trace.iter().all(|s| s.retention_ok));
    }

    #[test]
    fn paper_constants_follow_the_recursion() {
        let cfg = ProcedureConfig::paper_scale(&Graph::complete(3), 4).unwrap();
        assert_eq!(cfg.constants[0], BigUint::from(772u32));
        let c2 = BigUint::from(4u32) * (BigUint::from(3u32) * BigUint::from(772u32).pow(3) + 1u32);
        assert_eq!(cfg.constants[1], c2);
        cfg.validate(&Graph::complete(3)).unwrap();
        assert!(matches!(ProcedureConfig::paper_scale(&Graph::complete(10), 10), Err(Error::UnsupportedSize(_))));
    }

    #[test]
    fn constant_validation() {
        let k3 = Graph::complete(3);
        let mut cfg = ProcedureConfig::desk_uniform(&k3, 4, 2);
        cfg.validate(&k3).unwrap();
        cfg.constants[2] = BigUint::from(1u32);
        assert!(matches!(cfg.validate(&k3), Err(Error::Validation(_))));
        let mut paper = ProcedureConfig::paper_scale(&k3, 4).unwrap();
        paper.constants[1] = paper.constants[0].clone() + 1u32;
        assert!(matches!(paper.validate(&k3), Err(Error::Validation(_))));
        let short = ProcedureConfig { t: 4, constants: vec![BigUint::from(3u32)], mode: ConstantsMode::DeskScale };
        assert!(short.validate(&k3).is_err());
    }

    #[test]
    fn disjoint_copies_at_paper_scale_are_sparse() {
        let k3 = Graph::complete(3);
        let b = blow_up(&k3, &[], 5).unwrap();
        let family = rainbow_family(&b.graph, &k3, b.phi.clone());
        assert_eq!(family.len(), 5);
        let cfg = ProcedureConfig::paper_scale(&k3, 4).unwrap();
        let o = refine_families(&k3, &family, &[0, 1, 2], &cfg).unwrap();
        assert_eq!(o.kind, OutcomeKind::Sparse);
        assert_eq!(o.l, 4);
        assert_dichotomy(&o, 3, 4);
        assert!(o.trace.iter().all(|s| s.branch == Branch::Restrict && s.kept == 5));
        let check = o.sparse_check.unwrap();
        assert_eq!((check.a, check.family_size), (1, 5));
        assert!(check.holds);
    }

    #[test]
    fn star_with_desk_constants() {
        let p3 = Graph::path(3);
        let star = Graph::star(4);
        let family = rainbow_family(&star, &p3, vec![1, 0, 0, 2, 2]);
        assert_eq!(family.len(), 4);
        let cfg = ProcedureConfig::desk_uniform(&p3, 4, 2);
        let o = refine_families(&p3, &family, &[0, 2, 1], &cfg).unwrap();
        assert_dichotomy(&o, 2, 4);
        assert_eq!(o.kind, OutcomeKind::Sparse);
        let chosen: Vec<_> = o.trace.iter().map(|s| s.chosen_edge).collect();
        assert_eq!(chosen, vec![Some((1, 0)), Some((1, 2))]);
        assert_eq!(o.trace[0].b_sizes[0], BSize { edge: (1, 0), size: 1, incident: 4 });

        // c = 1: the centre has degree 2 into each leaf class, nothing is low-degree
        let cfg = ProcedureConfig::desk_uniform(&p3, 4, 1);
        let o = refine_families(&p3, &family, &[0, 2, 1], &cfg).unwrap();
        assert_dichotomy(&o, 2, 4);
        assert_eq!(o.kind, OutcomeKind::Structured);
        assert_eq!(o.l, 1);
        assert_eq!(o.remaining_red, vec![(1, 0), (1, 2)]);
        assert!(o.families.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn single_edge_terminates_after_one_restrict() {
        let k2 = Graph::path(2);
        let g = Graph::path(2);
        let family = rainbow_family(&g, &k2, vec![0, 1]);
        let cfg = ProcedureConfig::desk_uniform(&k2, 3, 5);
        let o = refine_families(&k2, &family, &[0, 1], &cfg).unwrap();
        assert_eq!((o.kind, o.l), (OutcomeKind::Sparse, 2));
        assert_eq!(o.trace.len(), 1);
        let line: serde_json::Value = serde_json::from_str(o.trace_jsonl().trim()).unwrap();
        assert_eq!(line["branch"], "restrict");
        assert_eq!(line["family_size"], 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let k2 = Graph::path(2);
        let cfg = ProcedureConfig::desk_uniform(&k2, 3, 5);
        let empty = rainbow_family(&Graph::empty(2), &k2, vec![0, 1]);
        assert!(matches!(refine_families(&k2, &empty, &[0, 1], &cfg), Err(Error::Validation(_))));
        let unlabelled = CopyFamily::new(vec![Embedding(vec![0, 1])], None);
        assert!(refine_families(&k2, &unlabelled, &[0, 1], &cfg).is_err());
        let family = rainbow_family(&Graph::path(2), &k2, vec![0, 1]);
        assert!(refine_families(&k2, &family, &[0, 0], &cfg).is_err());
    }

    #[test]
    fn random_instances_respect_dichotomy_and_retention() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let patterns = [Graph::path(3), Graph::complete(3), Graph::path(4), Graph::star(3)];
        for round in 0..60 {
            let h_graph = &patterns[round % patterns.len()];
            let n = rng.gen_range(6..16);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.35) {
                        g.add_edge(u, v);
                    }
                }
            }
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..h_graph.n())).collect();
            let family = rainbow_family(&g, h_graph, labels);
            if family.is_empty() {
                continue;
            }
            let t = rng.gen_range(2..6);
            let c = rng.gen_range(1..4);
            let cfg = ProcedureConfig::desk_uniform(h_graph, t, c);
            let order: Vec<usize> = (0..h_graph.n()).collect();
            let o = refine_families(h_graph, &family, &order, &cfg).unwrap();
            assert_dichotomy(&o, h_graph.edge_count(), t);
            for w in o.families.windows(2) {
                assert!(w[1].iter().all(|f| w[0].embeddings.contains(f)));
            }
        }
    }
}
