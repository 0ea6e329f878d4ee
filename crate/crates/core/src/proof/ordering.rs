use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::VertexOrdering;
use crate::subgraph::CopyFamily;

#[derive(Debug, Clone, Serialize)]
pub struct PopularOrdering {
    /// Vertices of `H` from earliest to latest.
    pub order_h: Vec<usize>,
    /// Copies whose inherited order is `order_h`.
    pub family: CopyFamily,
    /// Number of distinct inherited orders seen.
    pub distinct_orders: usize,
}

/// Each copy orders `V(H)` by the positions of its images in `ordering`;
/// keeps the copies carrying the most frequent order (lexicographically
/// smallest among equally frequent ones).
pub fn popular_ordering(family: &CopyFamily, ordering: &VertexOrdering) -> Result<PopularOrdering> {
    let pos = ordering.positions();
    let mut buckets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, emb) in family.iter().enumerate() {
        let map = emb.as_slice();
        if let Some(&v) = map.iter().find(|&&v| v >= pos.len()) {
            return Err(Error::validation(format!("ordering does not cover host vertex {v}")));
        }
        let mut order: Vec<usize> = (0..map.len()).collect();
        order.sort_by_key(|&u| pos[map[u]]);
        buckets.entry(order).or_default().push(k);
    }
    let distinct_orders = buckets.len();
    // BTreeMap iterates lexicographically, so the first strict maximum wins ties
    let best = buckets.into_iter().fold(None::<(Vec<usize>, Vec<usize>)>, |best, (order, members)| match best {
        Some((bo, bm)) if bm.len() >= members.len() => Some((bo, bm)),
        _ => Some((order, members)),
    });
    let h = family.embeddings.first().map_or(0, |e| e.as_slice().len());
    let (order_h, members) = best.unwrap_or_else(|| ((0..h).collect(), Vec::new()));
    let kept = members.into_iter().map(|k| family.embeddings[k].clone()).collect();
    Ok(PopularOrdering { order_h, family: family.with_embeddings(kept), distinct_orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgraph::Embedding;

    fn fam(maps: &[&[usize]]) -> CopyFamily {
        CopyFamily::new(maps.iter().map(|m| Embedding(m.to_vec())).collect(), None)
    }

    fn identity(n: usize) -> VertexOrdering {
        VertexOrdering { order: (0..n).collect(), bound: 0 }
    }

    #[test]
    fn disjoint_identically_ordered_copies_all_survive() {
        let f = fam(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]]);
        let p = popular_ordering(&f, &identity(9)).unwrap();
        assert_eq!(p.family.len(), 3);
        assert_eq!(p.order_h, vec![0, 1, 2]);
    }

    #[test]
    fn majority_order_wins() {
        let f = fam(&[&[0, 1, 2], &[3, 4, 5], &[8, 7, 6]]);
        let p = popular_ordering(&f, &identity(9)).unwrap();
        assert_eq!(p.family.len(), 2);
        assert_eq!(p.order_h, vec![0, 1, 2]);
        assert_eq!(p.distinct_orders, 2);
    }

    #[test]
    fn ties_prefer_lexicographically_smallest_order() {
        let f = fam(&[&[2, 1, 0], &[3, 4, 5]]);
        let p = popular_ordering(&f, &identity(6)).unwrap();
        assert_eq!(p.order_h, vec![0, 1, 2]);
        assert_eq!(p.family.embeddings, vec![Embedding(vec![3, 4, 5])]);
    }

    #[test]
    fn single_copy() {
        let f = fam(&[&[4, 0, 2]]);
        let p = popular_ordering(&f, &identity(5)).unwrap();
        assert_eq!(p.order_h, vec![1, 2, 0]);
        assert_eq!(p.family.len(), 1);
    }

    #[test]
    fn pigeonhole_bound_holds() {
        // 3! orders of a triangle on a fixed vertex set plus extras
        let f = fam(&[&[0, 1, 2], &[0, 2, 1], &[1, 0, 2], &[1, 2, 0], &[2, 0, 1], &[2, 1, 0], &[0, 1, 2]]);
        let p = popular_ordering(&f, &identity(3)).unwrap();
        assert!(p.family.len() * 6 >= f.len());
    }
}
