use std::fmt::Write as _;

use crate::graph::{EdgeKind, Graph};

/// Graphviz rendering: frames become clusters, points are filled circles, calls are ovals.
pub fn export_dot(g: &Graph) -> String {
    let mut out = String::from("digraph diaplan {\n");
    out.push_str("    node [shape=circle, label=\"\", width=0.15];\n");
    out.push_str("    edge [arrowhead=none];\n");
    write_level(g, "", 1, &mut out);
    out.push_str("}\n");
    out
}

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn write_level(g: &Graph, prefix: &str, depth: usize, out: &mut String) {
    let pad = "    ".repeat(depth);
    let node = |n: crate::graph::NodeId| format!("{prefix}n{}", n.0);
    let edge = |e: crate::graph::EdgeId| format!("{prefix}e{}", e.0);
    for n in g.nodes() {
        let mut attrs = Vec::new();
        if g.points().contains(&n) {
            attrs.push("style=filled, fillcolor=black".to_string());
        }
        if g.is_spread(n) {
            attrs.push("shape=doublecircle".to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "{pad}{};", node(n));
        } else {
            let _ = writeln!(out, "{pad}{} [{}];", node(n), attrs.join(", "));
        }
    }
    for (id, e) in g.edges() {
        let name = edge(id);
        let label = esc(e.label.as_str());
        if e.kind == EdgeKind::Plain && e.att.len() == 2 && e.label.as_str().is_empty() {
            let _ = writeln!(out, "{pad}{} -> {};", node(e.att[0]), node(e.att[1]));
            continue;
        }
        match (e.kind, e.contents()) {
            (EdgeKind::Frame, Some(c)) => {
                let _ = writeln!(out, "{pad}subgraph cluster_{name} {{");
                let _ = writeln!(out, "{pad}    label=\"{label}\";");
                let _ = writeln!(out, "{pad}    {name} [shape=point];");
                write_level(c, &format!("{name}_"), depth + 1, out);
                let _ = writeln!(out, "{pad}}}");
            }
            _ => {
                let shape = match e.kind {
                    EdgeKind::Call => "shape=ellipse",
                    EdgeKind::Disguised => "shape=ellipse, peripheries=2",
                    EdgeKind::Variable(_) => "shape=box, style=dashed, fontname=\"Times-Italic\"",
                    EdgeKind::Nonterminal => "shape=box, style=rounded",
                    _ => "shape=box",
                };
                let _ = writeln!(out, "{pad}{name} [{shape}, label=\"{label}\", width=0, height=0];");
            }
        }
        for (i, a) in e.att.iter().enumerate() {
            let _ = writeln!(out, "{pad}{name} -> {} [label=\"{}\"];", node(*a), i + 1);
        }
        for p in &e.params {
            let _ = writeln!(out, "{pad}{name} -> {} [style=dotted, arrowhead=normal];", edge(*p));
        }
    }
}
