mod common;

use common::{list_graph, list_mutants, program};
use diaplan::dsl::parse_program;
use diaplan::shapes::{conforms, parse, ParseOptions, ShapeGrammar, TypeTerm};
use diaplan::Graph;

fn list_grammar() -> ShapeGrammar {
    let p = program("list.dp");
    p.grammar.monomorphize(&TypeTerm::parse("L<I>").unwrap()).unwrap()
}

/// Every sequence of item kinds of length up to 3.
fn item_sequences() -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..3 {
        let mut next = Vec::new();
        for s in &frontier {
            for k in 0..3 {
                let mut t: Vec<usize> = s.clone();
                t.push(k);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn lists_of_up_to_three_items_parse() {
    let g = list_grammar();
    for items in item_sequences() {
        let d = parse(&g, "L<I>", &list_graph(&items), &ParseOptions::default());
        let d = d.unwrap_or_else(|| panic!("{items:?} rejected"));
        assert_eq!(d.uses("L<I>", 1), items.len());
    }
}

#[test]
fn mutants_are_rejected() {
    let g = list_grammar();
    for (name, m) in list_mutants() {
        assert!(parse(&g, "L<I>", &m, &ParseOptions::default()).is_none(), "{name} accepted");
    }
}

#[test]
fn item_contents_are_checked() {
    let g = list_grammar();
    let bad = diaplan::dsl::parse_graph("points v0 v1; frame Item(v0, v1) = { points x; edge (x, x); };").unwrap();
    assert!(parse(&g, "L<I>", &bad.graph, &ParseOptions::default()).is_none());
}

#[test]
fn derivation_tree_prints_nested() {
    let g = list_grammar();
    let d = parse(&g, "L<I>", &list_graph(&[0, 2]), &ParseOptions::default()).unwrap();
    let text = d.to_text();
    assert!(text.starts_with("L<I> #1\n"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("  ")));
}

#[test]
fn monomorphized_grammar_equals_hand_written_one() {
    let hand = parse_program(
        "shape I(..) ::=
            { points a b; edge (a, b); edge (a, b); edge (a, b); }
          | { points a; edge (a, b); edge (a, c); edge (a, d); edge (b, d); edge (c, d); }
          | { edge (a, b); edge (a, c); edge (b, c); };
         shape LI(2) ::=
            { node v; points v v; }
          | { points a d; type LI(a, b); frame Item(b, c) = { points ..S; type I(..S); }; type LI(c, d); };",
    )
    .unwrap()
    .grammar;
    let mono = list_grammar();
    let mut corpus: Vec<Graph> = item_sequences().iter().map(|s| list_graph(s)).collect();
    corpus.extend(list_mutants().into_iter().map(|(_, g)| g));
    let opts = ParseOptions::default();
    for g in &corpus {
        assert_eq!(conforms(&mono, "L<I>", g, &opts), conforms(&hand, "LI", g, &opts));
    }
}

#[test]
fn node_cutoff_rejects_large_hosts() {
    let g = list_grammar();
    let opts = ParseOptions {
        max_nodes: 3,
        ..ParseOptions::default()
    };
    assert!(parse(&g, "L<I>", &list_graph(&[0, 0, 0]), &opts).is_none());
}
