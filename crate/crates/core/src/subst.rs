//! Substitutions, instantiation and contexts.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Edge, EdgeId, EdgeKind, Graph, NodeId, VarMode};
use crate::symbol::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("arity mismatch for {name}: edge has {attachments} attachments, bound graph has {points} points")]
    ArityMismatch {
        name: Symbol,
        attachments: usize,
        points: usize,
    },
    #[error("a context needs exactly one variable edge, found {0}")]
    NotAContext(usize),
    #[error("no edge {0} at the addressed level")]
    UnknownEdge(EdgeId),
}

/// A finite map from variable names to pointed graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Symbol, Graph>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<Symbol>, g: Graph) -> Option<Graph> {
        self.bindings.insert(name.into(), g)
    }

    pub fn get(&self, name: &str) -> Option<&Graph> {
        self.bindings.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Graph)> {
        self.bindings.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &Symbol> {
        self.bindings.keys()
    }
}

impl FromIterator<(Symbol, Graph)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Symbol, Graph)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// Where the copy of a glued graph ended up in the target.
#[derive(Clone, Debug, Default)]
pub struct Glued {
    pub nodes: BTreeMap<NodeId, NodeId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
    /// Target nodes that were merged away, with the node that replaced them.
    pub merged: Vec<(NodeId, NodeId)>,
}

/// Copies `replacement` into `target` and identifies its k-th point with `att[k]`.
pub fn glue(target: &mut Graph, replacement: &Graph, att: &[NodeId]) -> Glued {
    debug_assert_eq!(replacement.points().len(), att.len());
    let (mut nodes, edges) = replacement.copy_into(target);
    let mut alias: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let find = |alias: &BTreeMap<NodeId, NodeId>, mut n: NodeId| {
        while let Some(m) = alias.get(&n) {
            n = *m;
        }
        n
    };
    let mut dropped = Vec::new();
    for (p, a) in replacement.points().iter().zip(att) {
        let x = find(&alias, nodes[p]);
        let y = find(&alias, *a);
        if x != y {
            target.merge_nodes(y, x);
            alias.insert(x, y);
            if att.contains(&x) {
                dropped.push(x);
            }
        }
    }
    for v in nodes.values_mut() {
        *v = find(&alias, *v);
    }
    let merged = dropped.into_iter().map(|x| (x, find(&alias, x))).collect();
    Glued { nodes, edges, merged }
}

/// The edge of a bound predicate graph that is not a parameter of another edge.
fn principal_edge(g: &Graph) -> Option<EdgeId> {
    let free: Vec<(EdgeId, &Edge)> = g
        .edges()
        .filter(|(id, _)| !g.edges().any(|(_, e)| e.params.contains(id)))
        .collect();
    free.iter()
        .find(|(_, e)| e.kind.takes_params())
        .or(free.first())
        .map(|(id, _)| *id)
}

/// Replaces edge `e` of `target` by a copy of `replacement`, identifying points with the edge's
/// attachments. Parameter links to `e` are redirected to the principal edge of the copy. For
/// predicate variables the principal edge is switched to the call or disguised form.
pub fn replace_edge(target: &mut Graph, e: EdgeId, replacement: &Graph) -> Result<Glued, SubstError> {
    let edge = target.edge(e).ok_or(SubstError::UnknownEdge(e))?.clone();
    if edge.att.len() != replacement.points().len() {
        return Err(SubstError::ArityMismatch {
            name: edge.label.clone(),
            attachments: edge.att.len(),
            points: replacement.points().len(),
        });
    }
    target.remove_edge(e);
    let glued = glue(target, replacement, &edge.att);
    let principal = principal_edge(replacement).map(|p| glued.edges[&p]);
    let forced = match edge.kind {
        EdgeKind::Variable(VarMode::Call) => Some(EdgeKind::Call),
        EdgeKind::Variable(VarMode::Disguised) => Some(EdgeKind::Disguised),
        _ => None,
    };
    if let (Some(kind), Some(p)) = (forced, principal) {
        if let Some(pe) = target.edge_mut(p) {
            if matches!(pe.kind, EdgeKind::Call | EdgeKind::Disguised) {
                pe.kind = kind;
            }
        }
    }
    let ids: Vec<EdgeId> = target.edge_ids().collect();
    for id in ids {
        let pe = target.edge_mut(id).expect("edge");
        if pe.params.contains(&e) {
            match principal {
                Some(p) => pe.params.iter_mut().filter(|x| **x == e).for_each(|x| *x = p),
                None => pe.params.retain(|x| *x != e),
            }
        }
    }
    Ok(glued)
}

/// Instantiates every variable edge bound in `s`, at every depth. Unbound variables remain.
pub fn instantiate(g: &Graph, s: &Substitution) -> Result<Graph, SubstError> {
    let mut out = g.clone();
    instantiate_in_place(&mut out, s)?;
    Ok(out)
}

/// In-place form of [`instantiate`]; returns the glue records of the top level, in edge order.
pub fn instantiate_in_place(g: &mut Graph, s: &Substitution) -> Result<Vec<(EdgeId, Glued)>, SubstError> {
    let frames: Vec<EdgeId> = g
        .edges()
        .filter(|(_, e)| e.contents.is_some())
        .map(|(id, _)| id)
        .collect();
    for f in frames {
        let c = g.edge_mut(f).and_then(|e| e.contents.as_deref_mut()).expect("frame");
        instantiate_in_place(c, s)?;
    }
    let vars: Vec<(EdgeId, Symbol)> = g
        .edges()
        .filter(|(_, e)| e.kind.is_variable())
        .map(|(id, e)| (id, e.label.clone()))
        .collect();
    let mut records = Vec::new();
    for (id, name) in vars {
        if let Some(bound) = s.get(name.as_str()) {
            records.push((id, replace_edge(g, id, bound)?));
        }
    }
    Ok(records)
}

/// Every variable edge at every depth as (name, arity), sorted.
pub fn variables_of(g: &Graph) -> Vec<(Symbol, usize)> {
    let mut out: Vec<(Symbol, usize)> = g
        .all_edges()
        .into_iter()
        .filter(|(_, _, e)| e.kind.is_variable())
        .map(|(_, _, e)| (e.label.clone(), e.att.len()))
        .collect();
    out.sort();
    out
}

/// Name of the hole in contexts produced by matching.
pub const HOLE: &str = "[]";

/// A graph with exactly one variable edge (the hole), at any depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    graph: Graph,
    hole: Symbol,
    arity: usize,
}

impl Context {
    pub fn new(graph: Graph) -> Result<Self, SubstError> {
        let vars: Vec<(Symbol, usize)> = variables_of(&graph);
        if vars.len() != 1 {
            return Err(SubstError::NotAContext(vars.len()));
        }
        let (hole, arity) = vars.into_iter().next().expect("one variable");
        Ok(Context { graph, hole, arity })
    }

    /// The context whose graph is just the hole, attached to `k` nodes that are its points.
    pub fn identity(k: usize) -> Self {
        let mut g = Graph::new();
        let ns = g.add_nodes(k);
        g.add_edge(Edge::var(HOLE, VarMode::Graph, ns.clone()));
        g.set_points(ns);
        Context {
            graph: g,
            hole: Symbol::new(HOLE),
            arity: k,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn hole(&self) -> &Symbol {
        &self.hole
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Viewing the context as an ordinary graph, e.g. to plug it into another context.
    pub fn into_graph(self) -> Graph {
        self.graph
    }
}

/// `C[G]`: instantiates the hole of `c` with `g`.
pub fn plug(c: &Context, g: &Graph) -> Result<Graph, SubstError> {
    let mut s = Substitution::new();
    s.bind(c.hole.clone(), g.clone());
    instantiate(&c.graph, &s)
}
