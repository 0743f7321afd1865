use std::fmt::Write as _;

use crate::graph::{EdgeKind, Graph, NodeId, VarMode};

/// Statements that [`super::parse_graph`] reads back into an isomorphic graph. Nodes are
/// named `n<id>`, edges `e<id>`.
pub fn print_graph(g: &Graph) -> String {
    let mut out = String::new();
    print_body(g, 0, &mut out);
    out
}

fn node_ref(g: &Graph, n: NodeId) -> String {
    if g.is_spread(n) {
        format!("..n{}", n.0)
    } else {
        format!("n{}", n.0)
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn quoted(label: &str) -> String {
    if is_ident(label) {
        label.to_string()
    } else if label.is_empty() {
        String::new()
    } else {
        format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn print_body(g: &Graph, depth: usize, out: &mut String) {
    let pad = "    ".repeat(depth);
    let nodes: Vec<String> = g.nodes().map(|n| node_ref(g, n)).collect();
    if !nodes.is_empty() {
        let _ = writeln!(out, "{pad}node {};", nodes.join(" "));
    }
    if !g.points().is_empty() {
        let pts: Vec<String> = g.points().iter().map(|p| node_ref(g, *p)).collect();
        let _ = writeln!(out, "{pad}points {};", pts.join(" "));
    }
    for (id, e) in g.edges() {
        let kw = match e.kind {
            EdgeKind::Plain => "edge",
            EdgeKind::Frame => "frame",
            EdgeKind::Variable(VarMode::Graph) => "var",
            EdgeKind::Variable(VarMode::Frame) => "fvar",
            EdgeKind::Variable(VarMode::Call) | EdgeKind::Call => "call",
            EdgeKind::Variable(VarMode::Disguised) | EdgeKind::Disguised => "dcall",
            EdgeKind::Nonterminal => "type",
        };
        let label = if e.kind == EdgeKind::Nonterminal {
            e.label.to_string()
        } else {
            quoted(e.label.as_str())
        };
        let att: Vec<String> = e.att.iter().map(|n| node_ref(g, *n)).collect();
        let _ = write!(out, "{pad}{kw} e{}: {label}({})", id.0, att.join(", "));
        if !e.params.is_empty() {
            let ps: Vec<String> = e.params.iter().map(|p| format!("e{}", p.0)).collect();
            let _ = write!(out, "[{}]", ps.join(", "));
        }
        if let Some(c) = e.contents() {
            out.push_str(" = {\n");
            print_body(c, depth + 1, out);
            let _ = write!(out, "{pad}}}");
        }
        out.push_str(";\n");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_graph;
    use crate::graph::Edge;
    use crate::iso::isomorphic;

    #[test]
    fn empty_graph_prints_as_nothing() {
        assert_eq!(print_graph(&Graph::new()), "");
    }

    #[test]
    fn nested_frames_round_trip() {
        let mut inner = Graph::new();
        let a = inner.add_node();
        inner.add_edge(Edge::plain("odd label", vec![a]));
        inner.set_points(vec![a]);
        let mut g = inner.clone();
        for _ in 0..3 {
            let mut outer = Graph::new();
            let n = outer.add_node();
            outer.add_edge(Edge::frame("F", vec![n], g));
            outer.set_points(vec![n, n]);
            g = outer;
        }
        let text = print_graph(&g);
        let back = parse_graph(&text).unwrap();
        assert!(isomorphic(&back.graph, &g).is_some(), "{text}");
    }
}
