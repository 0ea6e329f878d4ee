mod common;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use turan_core::graph::{canonical_form, degeneracy_ordering, parse_graph, serialize_graph, GraphFormat};
use turan_core::lab::{lower_bound_construction, oracle_vs_construction, t_free_classes};
use turan_core::proof::{
    popular_ordering, rainbow_partition, refine_families, run_pipeline, EmbedOutcome, PipelineConfig,
    ProcedureConfig, RainbowStrategy,
};
use turan_core::{Error, Graph};

fn trees() -> Vec<Graph> {
    vec![Graph::path(3), Graph::path(4), Graph::star(3), Graph::path(5), Graph::star(4)]
}

#[test]
fn t_free_graphs_are_t_minus_two_degenerate() {
    for tree in trees() {
        for n in 1..=7 {
            for g in t_free_classes(n, &tree).unwrap().values() {
                let d = degeneracy_ordering(g).bound;
                assert!(d + 2 <= tree.n(), "{g:?} is {d}-degenerate yet free of {tree:?}");
            }
        }
    }
}

#[test]
fn t_free_classes_are_exactly_the_t_free_graphs() {
    // every labelled graph on 5 vertices lands in exactly one enumerated class iff it is T-free
    for tree in trees() {
        let classes = t_free_classes(5, &tree).unwrap();
        for g in all_graphs(5) {
            let free = !brute_contains(&g, &tree);
            assert_eq!(classes.contains_key(&canonical_form(&g).unwrap()), free, "{g:?} {tree:?}");
        }
    }
}

#[test]
fn construction_is_dominated_by_the_oracle() {
    let pairs = [
        (Graph::path(2), Graph::path(4)),
        (Graph::path(3), Graph::path(5)),
        (Graph::complete(3), Graph::path(4)),
        (Graph::star(3), Graph::path(5)),
    ];
    for (h, t) in pairs {
        for n in h.n()..=7 {
            match oracle_vs_construction(n, &h, &t) {
                Ok(c) => {
                    assert!(c.oracle >= c.construction);
                    let g = lower_bound_construction(&h, &t, n).unwrap();
                    assert!(!brute_contains(&g, &t));
                    assert_eq!(c.construction, BigUint::from(brute_copies(&g, &h)));
                }
                Err(Error::ZeroProfile) => assert!(brute_contains(&h, &t)),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn pipeline_never_reports_a_false_tree_copy() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let patterns = [Graph::path(2), Graph::path(3), Graph::complete(3), Graph::star(3), Graph::path(4)];
    let mut embedded = 0;
    for round in 0..150 {
        let h = &patterns[round % patterns.len()];
        let t = &trees()[rng.gen_range(0..3)];
        let n = rng.gen_range(4..14);
        let density = rng.gen_range(0.1..0.6);
        let g = random_graph(&mut rng, n, density);
        let cfg = PipelineConfig::desk_uniform(rng.gen_range(1..4));
        let report = run_pipeline(&g, h, t, &cfg).unwrap_or_else(|e| panic!("{g:?} {h:?} {t:?}: {e}"));
        let truly_free = !brute_contains(&g, t);
        if let Some(copy) = &report.t_copy {
            assert!(copy.is_valid(&g, t));
            assert!(!truly_free);
        }
        if let Some(s) = &report.structured {
            if let Some(EmbedOutcome::Embedded(cert)) = &s.embedding {
                embedded += 1;
                assert_eq!(cert.x_partition.iter().map(|b| b.len()).sum::<usize>(), t.n());
            }
        }
    }
    assert!(embedded > 0, "the corpus never exercised the tree embedding");
}

#[test]
fn refinement_trace_matches_golden_file() {
    let host = Graph::star(4);
    let h = Graph::path(3);
    let rainbow = rainbow_partition(&host, &h, RainbowStrategy::Derandomized).unwrap();
    let ordering = degeneracy_ordering(&rainbow.family.union_graph(host.n(), &h));
    let popular = popular_ordering(&rainbow.family, &ordering).unwrap();
    let cfg = ProcedureConfig::desk_uniform(&h, 4, 2);
    let out = refine_families(&h, &popular.family, &popular.order_h, &cfg).unwrap();
    let golden = include_str!("golden/star4_p3_desk2.jsonl");
    assert_eq!(out.trace_jsonl(), golden);
}

#[test]
fn graph6_round_trips_through_edge_lists() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(0..30);
        let g = random_graph(&mut rng, n, 0.3);
        let g6 = serialize_graph(&g, GraphFormat::Graph6);
        let el = serialize_graph(&g, GraphFormat::EdgeList);
        assert_eq!(parse_graph(&g6, GraphFormat::Graph6).unwrap(), g);
        assert_eq!(parse_graph(&el, GraphFormat::EdgeList).unwrap(), g);
    }
}
