mod common;

use common::{flat_corpus, flat_graphs, flat_patterns, split_oracle};
use diaplan::{enumerate_matches, Edge, Graph};
use proptest::prelude::*;

#[test]
fn corpus_counts_agree_with_split_oracle() {
    let corpus = flat_corpus();
    let patterns = flat_patterns();
    for host in &corpus {
        for (name, p) in &patterns {
            assert_eq!(enumerate_matches(host, p).len(), split_oracle(host, p), "{name} in {host:?}");
        }
    }
}

#[test]
fn triangle_has_three_single_edge_matches() {
    let triangle = flat_graphs(3, 3)
        .into_iter()
        .find(|g| {
            let e: Vec<_> = g.edges().map(|(_, e)| (e.label.to_string(), e.att.clone())).collect();
            let n: Vec<_> = g.nodes().collect();
            e.len() == 3
                && e.contains(&("a".into(), vec![n[0], n[1]]))
                && e.contains(&("a".into(), vec![n[1], n[2]]))
                && e.contains(&("a".into(), vec![n[2], n[0]]))
        })
        .unwrap();
    assert_eq!(enumerate_matches(&triangle, &flat_patterns()[0].1).len(), 3);
}

fn arb_flat() -> impl Strategy<Value = Graph> {
    (1usize..7).prop_flat_map(|n| {
        prop::collection::vec((prop::bool::ANY, 0..n, 0..n), 0..8).prop_map(move |edges| {
            let mut g = Graph::new();
            let ns = g.add_nodes(n);
            for (b, s, t) in edges {
                g.add_edge(Edge::plain(if b { "b" } else { "a" }, vec![ns[s], ns[t]]));
            }
            g
        })
    })
}

proptest! {
    #[test]
    fn larger_hosts_agree_with_split_oracle(host in arb_flat()) {
        for (_, p) in flat_patterns() {
            prop_assert_eq!(enumerate_matches(&host, &p).len(), split_oracle(&host, &p));
        }
    }

    #[test]
    fn every_match_covers_distinct_edges(host in arb_flat()) {
        for (_, p) in flat_patterns() {
            for m in enumerate_matches(&host, &p) {
                prop_assert_eq!(m.covered.len(), p.edge_count());
                prop_assert_eq!(m.hole.len(), p.points().len());
            }
        }
    }
}
