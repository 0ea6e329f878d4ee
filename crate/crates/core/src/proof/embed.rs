use std::collections::VecDeque;

use serde::Serialize;

use super::digraph::ColouredDigraph;
use crate::blowup::BlowupResult;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::subgraph::{CopyFamily, Embedding, LabelPartition};

/// Where an X-block lives in the blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "zone", content = "copy", rename_all = "lowercase")]
pub enum Zone {
    U,
    W(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepProvenance {
    /// 1-based step number, equal to the block index.
    pub step: usize,
    pub zone: Zone,
    /// 1-based index `i` of the family `F_i` that supplied the copy.
    pub family: usize,
    pub copy: Embedding,
    /// The tree edge `(earlier vertex, block vertex)` joining the block to the previous ones.
    pub attachment: Option<(usize, usize)>,
    /// Size of the pairwise `S`-disjoint collection searched (W-blocks after the first).
    pub disjoint_collection: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingCertificate {
    pub tree_map: Embedding,
    pub x_partition: Vec<Vec<usize>>,
    pub steps: Vec<StepProvenance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbedFailure {
    pub step: usize,
    pub zone: Zone,
    pub family: usize,
    pub reason: String,
    pub x_partition: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum EmbedOutcome {
    Embedded(EmbeddingCertificate),
    Failed(EmbedFailure),
}

struct Blocks {
    blocks: Vec<Vec<usize>>,
    zones: Vec<Zone>,
    /// For blocks after the first, the tree edge `(earlier, inside)` joining it.
    attach: Vec<Option<(usize, usize)>>,
}

/// Components of `T` after cutting the edges that cross zones, ordered by a
/// BFS over the block tree from the block of vertex 0.
fn x_blocks(tree: &Graph, gamma: &Embedding, blowup: &BlowupResult) -> Blocks {
    let t = tree.n();
    let zone_of = |x: usize| match blowup.copy_index[gamma.image(x)] {
        0 => Zone::U,
        j => Zone::W(j),
    };
    let mut block_of = vec![usize::MAX; t];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for s in 0..t {
        if block_of[s] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut part = vec![s];
        block_of[s] = id;
        let mut k = 0;
        while k < part.len() {
            let x = part[k];
            k += 1;
            for y in tree.neighbors(x) {
                if block_of[y] == usize::MAX && zone_of(y) == zone_of(x) {
                    block_of[y] = id;
                    part.push(y);
                }
            }
        }
        part.sort_unstable();
        members.push(part);
    }
    let mut order = Vec::with_capacity(members.len());
    let mut attach = Vec::with_capacity(members.len());
    let mut seen = vec![false; members.len()];
    let mut queue = VecDeque::from([(block_of[0], None)]);
    seen[block_of[0]] = true;
    while let Some((b, edge)) = queue.pop_front() {
        order.push(b);
        attach.push(edge);
        for &x in &members[b] {
            for y in tree.neighbors(x) {
                let nb = block_of[y];
                if !seen[nb] {
                    seen[nb] = true;
                    queue.push_back((nb, Some((x, y))));
                }
            }
        }
    }
    let zones = order.iter().map(|&b| zone_of(members[b][0])).collect();
    let blocks = order.into_iter().map(|b| members[b].clone()).collect();
    Blocks { blocks, zones, attach }
}

/// Transfers an embedding of `T` into the blow-up `Γ` back to the host,
/// block by block, drawing each block from the next family down the chain
/// `F_t, F_{t-1}, ...`.
///
/// `families[i - 1]` is `F_i`; all are rainbow for `partition`, and
/// `digraph` is the red/blue digraph whose set `U` defined the blow-up.
#[allow(clippy::too_many_arguments)]
pub fn embed_tree(
    host: &Graph,
    h_graph: &Graph,
    tree: &Graph,
    gamma: &Embedding,
    blowup: &BlowupResult,
    families: &[CopyFamily],
    partition: &LabelPartition,
    digraph: &ColouredDigraph,
) -> Result<EmbedOutcome> {
    if !gamma.is_valid(&blowup.graph, tree) {
        return Err(Error::validation("gamma is not an embedding of T into the blow-up"));
    }
    if h_graph.n() != partition.class_count() || blowup.h != h_graph.n() {
        return Err(Error::validation("partition, blow-up and H disagree on |V(H)|"));
    }
    let t = families.len();
    if t == 0 {
        return Err(Error::validation("no families supplied"));
    }
    let Blocks { blocks, zones, attach } = x_blocks(tree, gamma, blowup);
    let k = blocks.len();
    if k > t {
        return Err(Error::UnsupportedSize(format!("{k} X-blocks but only {t} families")));
    }
    let phi = |x: usize| blowup.phi[gamma.image(x)];
    let mut f: Vec<Option<usize>> = vec![None; tree.n()];
    let mut steps = Vec::with_capacity(k);
    let failure = |step: usize, family: usize, reason: String| {
        Ok(EmbedOutcome::Failed(EmbedFailure { step, zone: zones[step - 1], family, reason, x_partition: blocks.clone() }))
    };

    for (idx, block) in blocks.iter().enumerate() {
        let step = idx + 1;
        // step i draws from F_{t-(i-1)}
        let fam_index = t - idx;
        let family = &families[fam_index - 1];
        let mut collection = None;
        let chosen = match attach[idx] {
            None => family.embeddings.first().cloned(),
            Some((p, c)) => {
                let fp = f[p].expect("attachment vertex already placed");
                let through: Vec<&Embedding> = family.iter().filter(|g| g.image(phi(p)) == fp).collect();
                match zones[idx] {
                    Zone::U => through.first().map(|g| (*g).clone()),
                    Zone::W(_) => {
                        let s_classes = digraph.reaching(phi(c));
                        let s_image = |g: &Embedding| -> Vec<usize> { s_classes.iter().map(|&v| g.image(v)).collect() };
                        let mut picked: Vec<(&Embedding, Vec<usize>)> = Vec::new();
                        for g in through {
                            if picked.len() == t {
                                break;
                            }
                            let img = s_image(g);
                            if picked.iter().all(|(_, other)| img.iter().all(|v| !other.contains(v))) {
                                picked.push((g, img));
                            }
                        }
                        collection = Some(picked.len());
                        let used: Vec<usize> = f.iter().flatten().copied().collect();
                        picked.into_iter().find(|(_, img)| img.iter().all(|v| !used.contains(v))).map(|(g, _)| g.clone())
                    }
                }
            }
        };
        let Some(g) = chosen else {
            let reason = match (attach[idx], collection) {
                (None, _) => "family is empty".to_string(),
                (Some(_), None) => "no copy contains the attachment image".to_string(),
                (Some(_), Some(found)) => {
                    format!("none of the {found} pairwise S-disjoint copies avoids the vertices already used")
                }
            };
            return failure(step, fam_index, reason);
        };
        for &x in block {
            f[x] = Some(g.image(phi(x)));
        }
        steps.push(StepProvenance {
            step,
            zone: zones[idx],
            family: fam_index,
            copy: g,
            attachment: attach[idx],
            disjoint_collection: collection,
        });
    }

    let tree_map = Embedding(f.into_iter().map(|v| v.expect("every block placed")).collect());
    if !tree_map.is_valid(host, tree) {
        return Err(Error::internal(format!("extracted tree map {:?} is not an embedding", tree_map.0)));
    }
    if (0..tree.n()).any(|x| partition.label(tree_map.image(x)) != phi(x)) {
        return Err(Error::internal("extracted tree map leaves the class of its blow-up vertex"));
    }
    Ok(EmbedOutcome::Embedded(EmbeddingCertificate { tree_map, x_partition: blocks, steps }))
}
