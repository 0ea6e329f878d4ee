use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::subgraph::{all_embeddings, count_copies, list_copies, CopyFamily, LabelPartition, Matcher};

/// Largest number of labelled embeddings the derandomized strategy will hold in memory.
pub const EMBEDDING_LIMIT: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RainbowStrategy {
    Derandomized,
    Random { seed: u64, trials: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct RainbowResult {
    pub partition: Arc<LabelPartition>,
    /// The rainbow copies under `partition`.
    pub family: CopyFamily,
    /// `count_copies(G, H)`.
    #[serde(serialize_with = "crate::bigstr::serialize")]
    pub m: BigUint,
    /// Whether `|family| * h^h >= m`.
    pub guarantee_met: bool,
    pub strategy: RainbowStrategy,
}

/// Splits `V(G)` into classes `V_u`, one per vertex of `H`, and returns the
/// copies of `H` that map every `u` into `V_u`.
pub fn rainbow_partition(g: &Graph, h_graph: &Graph, strategy: RainbowStrategy) -> Result<RainbowResult> {
    h_graph.ensure_pattern("H")?;
    let h = h_graph.n();
    let m = count_copies(g, h_graph)?;
    let labels = match strategy {
        RainbowStrategy::Derandomized => derandomized_labels(g, h_graph)?,
        RainbowStrategy::Random { seed, trials } => random_labels(g, h_graph, seed, trials)?,
    };
    let partition = Arc::new(LabelPartition::from_labels(h, labels)?);
    let family = list_copies(g, h_graph, Some(partition.clone()), usize::MAX)?;
    let guarantee_met = BigUint::from(family.len()) * BigUint::from(h).pow(h as u32) >= m;
    if strategy == RainbowStrategy::Derandomized && !guarantee_met {
        return Err(Error::internal("derandomized labelling fell below the expected rainbow count"));
    }
    Ok(RainbowResult { partition, family, m, guarantee_met, strategy })
}

/// Method of conditional expectations over uniformly random labels.
///
/// With a partial labelling, an embedding `f` is still rainbow with
/// probability `h^-(unlabelled vertices of f)` if every labelled image vertex
/// carries the right label, and 0 otherwise. Scaled by `h^h` that is the
/// integer weight `h^(labelled vertices of f)`. Vertices are labelled in index
/// order; labelling `v` with `L` keeps exactly the live embeddings that send
/// `L` to `v` (and those avoiding `v`), so the best label maximizes the live
/// weight of embeddings with `f(L) = v`. Ties go to the smallest label.
fn derandomized_labels(g: &Graph, h_graph: &Graph) -> Result<Vec<usize>> {
    let h = h_graph.n();
    let total = Matcher::new(g, h_graph, None).count();
    if total > EMBEDDING_LIMIT as u128 {
        return Err(Error::UnsupportedSize(format!(
            "{total} labelled embeddings exceed the derandomization limit {EMBEDDING_LIMIT}"
        )));
    }
    let embeddings = all_embeddings(g, h_graph, None);
    // occurrences[v] = (embedding index, pattern vertex mapped to v)
    let mut occurrences: Vec<Vec<(u32, u8)>> = vec![Vec::new(); g.n()];
    for (k, emb) in embeddings.iter().enumerate() {
        for (u, &v) in emb.as_slice().iter().enumerate() {
            occurrences[v].push((k as u32, u as u8));
        }
    }
    let powers: Vec<u128> = (0..=h as u32).map(|e| (h as u128).pow(e)).collect();
    let mut alive = vec![true; embeddings.len()];
    let mut labelled = vec![0u8; embeddings.len()];
    let mut labels = vec![0; g.n()];
    let mut score = vec![0u128; h];
    for v in 0..g.n() {
        score.iter_mut().for_each(|s| *s = 0);
        for &(k, u) in &occurrences[v] {
            if alive[k as usize] {
                score[u as usize] += powers[labelled[k as usize] as usize];
            }
        }
        // first maximum = smallest label among the best
        let best = (0..h).fold(0, |best, l| if score[l] > score[best] { l } else { best });
        labels[v] = best;
        for &(k, u) in &occurrences[v] {
            if u as usize == best {
                labelled[k as usize] += 1;
            } else {
                alive[k as usize] = false;
            }
        }
    }
    Ok(labels)
}

fn random_labels(g: &Graph, h_graph: &Graph, seed: u64, trials: u32) -> Result<Vec<usize>> {
    if trials == 0 {
        return Err(Error::validation("random strategy needs at least one trial"));
    }
    let h = h_graph.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(u128, Vec<usize>)> = None;
    for _ in 0..trials {
        let labels: Vec<usize> = (0..g.n()).map(|_| rng.gen_range(0..h)).collect();
        let partition = LabelPartition::from_labels(h, labels)?;
        let count = Matcher::new(g, h_graph, Some(&partition)).count();
        if best.as_ref().is_none_or(|(b, _)| count > *b) {
            best = Some((count, partition.labels().to_vec()));
        }
    }
    Ok(best.expect("at least one trial").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_mask;

    /// Oracle: best rainbow count over every labelling of a small host.
    fn best_labelling(g: &Graph, h_graph: &Graph) -> usize {
        let (n, h) = (g.n(), h_graph.n());
        let mut best = 0;
        for code in 0..h.pow(n as u32) {
            let mut c = code;
            let labels: Vec<usize> = (0..n)
                .map(|_| {
                    let l = c % h;
                    c /= h;
                    l
                })
                .collect();
            let p = LabelPartition::from_labels(h, labels).unwrap();
            best = best.max(Matcher::new(g, h_graph, Some(&p)).count() as usize);
        }
        best
    }

    #[test]
    fn examples() {
        let k3 = Graph::complete(3);
        let r = rainbow_partition(&k3, &k3, RainbowStrategy::Derandomized).unwrap();
        assert_eq!(r.family.len(), 1);
        assert!(r.guarantee_met);

        let two = k3.disjoint_union(&k3);
        let r = rainbow_partition(&two, &k3, RainbowStrategy::Derandomized).unwrap();
        assert!(!r.family.is_empty());
        assert_eq!(best_labelling(&two, &k3), 2);

        let star = Graph::star(4);
        let p3 = Graph::path(3);
        let r = rainbow_partition(&star, &p3, RainbowStrategy::Derandomized).unwrap();
        assert!(!r.family.is_empty());
        assert_eq!(best_labelling(&star, &p3), 4);
        assert_eq!(r.m, 6u32.into());
    }

    #[test]
    fn family_is_rainbow_and_complete() {
        let g = graph_from_mask(6, 0b1011_0110_1101_011);
        let p3 = Graph::path(3);
        let r = rainbow_partition(&g, &p3, RainbowStrategy::Derandomized).unwrap();
        r.family.check(&g, &p3).unwrap();
        let direct = Matcher::new(&g, &p3, Some(&r.partition)).count();
        assert_eq!(direct as usize, r.family.len());
    }

    #[test]
    fn derandomized_never_below_the_best_guarantee_on_small_hosts() {
        let k2 = Graph::path(2);
        for mask in 0u64..1 << 10 {
            let g = graph_from_mask(5, mask);
            let r = rainbow_partition(&g, &k2, RainbowStrategy::Derandomized).unwrap();
            assert!(r.family.len() <= best_labelling(&g, &k2));
            assert!(BigUint::from(r.family.len() * 4) >= r.m);
        }
    }

    #[test]
    fn random_strategy_is_seeded() {
        let g = Graph::star(7);
        let p3 = Graph::path(3);
        let s = RainbowStrategy::Random { seed: 11, trials: 5 };
        let a = rainbow_partition(&g, &p3, s).unwrap();
        let b = rainbow_partition(&g, &p3, s).unwrap();
        assert_eq!(a.partition.labels(), b.partition.labels());
        assert_eq!(a.family.embeddings, b.family.embeddings);
        assert!(rainbow_partition(&g, &p3, RainbowStrategy::Random { seed: 1, trials: 0 }).is_err());
    }
}
