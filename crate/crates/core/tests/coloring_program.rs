mod common;

use common::{colorable, proper, COLORS};
use diaplan::dsl::parse_program;
use diaplan::eval::{check_predicates, check_visibility};
use diaplan::shapes::check_program;
use diaplan::{run, Budget, Edge, Graph, Outcome, Program};

fn coloring() -> Program {
    parse_program(include_str!("../programs/coloring.dp")).unwrap()
}

fn goal(p: &Program, graph: &str, pred: &str) -> Graph {
    let mut g = p.graphs[graph].graph.clone();
    g.add_edge(Edge::call(pred, vec![]));
    g
}

#[test]
fn program_passes_all_checks() {
    let p = coloring();
    for r in [check_predicates(&p), check_visibility(&p), check_program(&p)] {
        assert!(r.is_empty(), "{r}");
    }
}

#[test]
fn square_gets_a_proper_coloring() {
    let p = coloring();
    match run(&p, &goal(&p, "square4", "coloring"), Budget::default()).outcome {
        Outcome::Success(g) => assert!(proper(&g, &COLORS), "{}", diaplan::dsl::print_graph(&g)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn search_agrees_with_brute_force() {
    let p = coloring();
    for (graph, pred, palette) in [
        ("triangle", "twoColoring", &COLORS[..2]),
        ("triangle", "coloring", &COLORS[..]),
        ("square4", "twoColoring", &COLORS[..2]),
    ] {
        let expected = colorable(&p.graphs[graph].graph, palette);
        let outcome = run(&p, &goal(&p, graph, pred), Budget::default()).outcome;
        assert_eq!(matches!(outcome, Outcome::Success(_)), expected, "{graph} {pred}");
        if !expected {
            assert_eq!(outcome, Outcome::Failure);
        }
    }
}
