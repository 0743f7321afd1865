#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use diaplan::dsl::{parse_graph, parse_program};
use diaplan::{Edge, EdgeKind, Graph, NodeId, Program, VarMode};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn program_text(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("programs").join(name);
    std::fs::read_to_string(path).unwrap()
}

pub fn program(name: &str) -> Program {
    parse_program(&program_text(name)).unwrap()
}

/// Every flat graph with `nodes` nodes and up to `max_edges` binary edges labeled `a` or `b`,
/// as multisets of edges.
pub fn flat_graphs(nodes: usize, max_edges: usize) -> Vec<Graph> {
    let mut kinds = Vec::new();
    for label in ["a", "b"] {
        for s in 0..nodes {
            for t in 0..nodes {
                kinds.push((label, s, t));
            }
        }
    }
    let mut out = Vec::new();
    let mut pick: Vec<usize> = Vec::new();
    fn rec(kinds: &[(&str, usize, usize)], nodes: usize, max: usize, pick: &mut Vec<usize>, out: &mut Vec<Graph>) {
        let mut g = Graph::new();
        let ns = g.add_nodes(nodes);
        for &k in pick.iter() {
            let (l, s, t) = kinds[k];
            g.add_edge(Edge::plain(l, vec![ns[s], ns[t]]));
        }
        out.push(g);
        if pick.len() == max {
            return;
        }
        let start = pick.last().copied().unwrap_or(0);
        for k in start..kinds.len() {
            pick.push(k);
            rec(kinds, nodes, max, pick, out);
            pick.pop();
        }
    }
    rec(&kinds, nodes, max_edges, &mut pick, &mut out);
    out
}

/// The corpus of all flat graphs with at most 4 nodes and 4 edges.
pub fn flat_corpus() -> Vec<Graph> {
    (0..=4).flat_map(|n| flat_graphs(n, 4)).collect()
}

/// Flat patterns; all their nodes are points.
pub fn flat_patterns() -> Vec<(&'static str, Graph)> {
    type Spec = (&'static str, usize, &'static [(&'static str, usize, usize)]);
    let specs: [Spec; 7] = [
        ("a(x,y)", 2, &[("a", 0, 1)]),
        ("a(x,y) b(y,z)", 3, &[("a", 0, 1), ("b", 1, 2)]),
        ("a(x,y) a(y,x)", 2, &[("a", 0, 1), ("a", 1, 0)]),
        ("a(x,x)", 1, &[("a", 0, 0)]),
        ("a(x,y) a(x,y)", 2, &[("a", 0, 1), ("a", 0, 1)]),
        ("x b(y,z)", 3, &[("b", 1, 2)]),
        ("a(x,y) b(x,y)", 2, &[("a", 0, 1), ("b", 0, 1)]),
    ];
    specs
        .iter()
        .map(|(name, n, edges)| {
            let mut g = Graph::new();
            let ns = g.add_nodes(*n);
            for (l, s, t) in edges.iter() {
                g.add_edge(Edge::plain(*l, vec![ns[*s], ns[*t]]));
            }
            g.set_points(ns);
            (*name, g)
        })
        .collect()
}

/// Counts matches of a flat all-points pattern by enumerating the splits of the host: every
/// subset of host edges of the right size, every bijection onto it, every injective placement
/// of the pattern's remaining nodes.
pub fn split_oracle(host: &Graph, pattern: &Graph) -> usize {
    let hedges: Vec<(&Edge, usize)> = host.edges().map(|(_, e)| e).zip(0..).collect();
    let pedges: Vec<&Edge> = pattern.edges().map(|(_, e)| e).collect();
    let pnodes: Vec<NodeId> = pattern.nodes().collect();
    let hnodes: Vec<NodeId> = host.nodes().collect();
    let mut count = 0;
    for subset in subsets(hedges.len(), pedges.len()) {
        for perm in permutations(&subset) {
            let mut map: Vec<Option<NodeId>> = vec![None; pnodes.len()];
            let mut ok = true;
            for (pe, hi) in pedges.iter().zip(&perm) {
                let he = hedges[*hi].0;
                if he.label != pe.label || he.att.len() != pe.att.len() {
                    ok = false;
                    break;
                }
                for (pa, ha) in pe.att.iter().zip(&he.att) {
                    let i = pnodes.iter().position(|n| n == pa).unwrap();
                    match map[i] {
                        Some(x) if x != *ha => ok = false,
                        _ => map[i] = Some(*ha),
                    }
                }
            }
            if !ok {
                continue;
            }
            let used: Vec<NodeId> = map.iter().flatten().copied().collect();
            if used.iter().collect::<BTreeSet<_>>().len() != used.len() {
                continue;
            }
            let free: Vec<NodeId> = hnodes.iter().filter(|n| !used.contains(n)).copied().collect();
            let open = map.iter().filter(|m| m.is_none()).count();
            count += falling(free.len(), open);
        }
    }
    count
}

fn falling(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        (n - k + 1..=n).product()
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Contents of the three item kinds, as statements.
pub const ITEMS: [&str; 3] = [
    "points x y; edge (x, y); edge (x, y); edge (x, y);",
    "points w; edge (w, x); edge (w, y); edge (w, z); edge (x, z); edge (y, z);",
    "edge (x, y); edge (x, z); edge (y, z);",
];

/// A list graph with the given item kinds, points `v0` and `v<k>`.
pub fn list_text(items: &[usize]) -> String {
    let mut s = format!("points v0 v{};\n", items.len());
    if items.is_empty() {
        s = "node v0; points v0 v0;\n".into();
    }
    for (i, k) in items.iter().enumerate() {
        s.push_str(&format!("frame Item(v{i}, v{}) = {{ {} }};\n", i + 1, ITEMS[*k]));
    }
    s
}

pub fn list_graph(items: &[usize]) -> Graph {
    parse_graph(&list_text(items)).unwrap().graph
}

/// Near-miss list graphs that are not of list shape.
pub fn list_mutants() -> Vec<(&'static str, Graph)> {
    let it = |k: usize| ITEMS[k];
    let texts = [
        (
            "broken chain",
            format!("points v0 v3; frame Item(v0, v1) = {{ {} }}; frame Item(v2, v3) = {{ {} }};", it(0), it(2)),
        ),
        ("extra edge", format!("{} edge (v0, v2);", list_text(&[0, 2]))),
        (
            "wrong frame label",
            format!("points v0 v2; frame Item(v0, v1) = {{ {} }}; frame Box(v1, v2) = {{ {} }};", it(0), it(2)),
        ),
        (
            "wrong point count",
            format!("points v0; frame Item(v0, v1) = {{ {} }};", it(0)),
        ),
        (
            "item outside frame",
            format!("points v0 v2; frame Item(v0, v1) = {{ {} }}; edge (v1, v2); edge (v1, v2); edge (v1, v2);", it(0)),
        ),
    ];
    texts
        .into_iter()
        .map(|(name, t)| (name, parse_graph(&t).unwrap().graph))
        .collect()
}

/// The list program with one violation added.
pub fn seeded(kind: &str) -> String {
    let list = program_text("list.dp");
    match kind {
        "non-linear pattern" => format!(
            "{list}\nsignature {{ points a b c; call dup(a, b, c); }};\n\
             pred dup(3) {{ rule {{ pattern {{ call dup(a, b, c); fvar X(a, b); fvar X(b, c); }} => {{ }} }} otherwise fail; }}\n"
        ),
        "unbound replacement variable" => format!(
            "{list}\nsignature {{ call mk(); }};\n\
             pred mk(0) {{ rule {{ pattern {{ call mk(); }} => {{ var Y(a); }} }} otherwise fail; }}\n"
        ),
        "private method call" => format!(
            "{}\nsignature {{ points a b; call peek(a, b); frame List(a, b); }};\n\
             pred peek(2) {{ otherwise succeed; }}\n\
             graph spy {{ call peek(h, t); frame List(h, t) = {{ node v; points v v; }}; }}\n",
            list.replace("public remove;", "public remove;\n    private peek;")
        ),
        "arity-wrong call" => format!("{list}\ngraph wrong {{ call remove(h); frame List(h, t) = {{ node v; points v v; }}; }}\n"),
        _ => panic!("unknown seed {kind}"),
    }
}

/// A random hierarchical graph: labels include odd strings, frames nest up to `depth`,
/// predicate edges may carry parameters.
pub fn random_graph<R: Rng>(rng: &mut R, depth: usize) -> Graph {
    const LABELS: [&str; 6] = ["a", "b", "", "odd label", "q\"uote", "x1"];
    let mut g = Graph::new();
    let n = rng.gen_range(0..5);
    let mut nodes = g.add_nodes(n);
    if rng.gen_bool(0.2) {
        nodes.push(g.add_spread_node());
    }
    let mut disguised = Vec::new();
    for _ in 0..rng.gen_range(0..5) {
        let arity = if nodes.is_empty() { 0 } else { rng.gen_range(0..4) };
        let att: Vec<NodeId> = (0..arity).map(|_| *nodes.choose(rng).unwrap()).collect();
        let label = *LABELS.choose(rng).unwrap();
        let edge = match rng.gen_range(0..6) {
            0 if depth > 0 => Edge::frame("F", att, random_graph(rng, depth - 1)),
            1 => Edge::var("X", VarMode::Graph, att),
            2 => Edge::disguised("p", att),
            3 if !disguised.is_empty() => Edge::call("q", att).with_params(vec![*disguised.choose(rng).unwrap()]),
            _ => Edge::plain(label, att),
        };
        let is_disguised = edge.kind == EdgeKind::Disguised;
        let id = g.add_edge(edge);
        if is_disguised {
            disguised.push(id);
        }
    }
    if !nodes.is_empty() {
        let pts = (0..rng.gen_range(0..4)).map(|_| *nodes.choose(rng).unwrap()).collect();
        g.set_points(pts);
    }
    g
}

pub const COLORS: [&str; 3] = ["red", "blue", "green"];

pub fn colors_of(g: &Graph) -> BTreeMap<NodeId, Vec<String>> {
    let mut out: BTreeMap<NodeId, Vec<String>> = BTreeMap::new();
    for (_, e) in g.edges() {
        if e.att.len() == 1 {
            out.entry(e.att[0]).or_default().push(e.label.to_string());
        }
    }
    out
}

pub fn proper(g: &Graph, palette: &[&str]) -> bool {
    let colors = colors_of(g);
    let nodes_ok = g
        .nodes()
        .all(|n| colors.get(&n).is_some_and(|c| c.len() == 1 && palette.contains(&c[0].as_str())));
    let edges_ok = g
        .edges()
        .filter(|(_, e)| e.att.len() == 2)
        .all(|(_, e)| colors[&e.att[0]] != colors[&e.att[1]]);
    nodes_ok && edges_ok
}

/// Tries every assignment of `palette` to the nodes of `g`.
pub fn colorable(g: &Graph, palette: &[&str]) -> bool {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let total = palette.len().pow(nodes.len() as u32);
    (0..total).any(|mut code| {
        let mut c = g.clone();
        let eps: Vec<_> = c.edges().filter(|(_, e)| e.label == "eps").map(|(id, _)| id).collect();
        for id in eps {
            c.remove_edge(id);
        }
        for n in &nodes {
            c.add_edge(Edge::plain(palette[code % palette.len()], vec![*n]));
            code /= palette.len();
        }
        proper(&c, palette)
    })
}
