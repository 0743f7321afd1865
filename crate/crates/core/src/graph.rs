//! Hierarchical pointed hypergraphs.
//!
//! A [`Graph`] is one level of a hierarchy: a set of nodes, a set of labeled hyperedges with
//! ordered attachments, and an ordered point sequence. Frame edges own a nested graph. Node and
//! edge identifiers are unique per level only; attachments never cross a frame boundary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::report::{ValidationReport, ViolationKind};
use crate::symbol::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// What a variable edge stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarMode {
    /// Binds a whole subgraph (inside a frame: the rest of its contents).
    Graph,
    /// Binds exactly one frame edge together with its contents.
    Frame,
    /// Binds one predicate edge (with its parameters); instantiated as a callable edge.
    Call,
    /// Binds one predicate edge; instantiated in disguised form.
    Disguised,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Plain,
    Frame,
    /// The label is the variable name.
    Variable(VarMode),
    /// A pending predicate call; the label is the predicate name.
    Call,
    /// A predicate call carried around as data; never evaluated in this form.
    Disguised,
    /// A shape-type edge, only meaningful inside shape grammar alternatives.
    Nonterminal,
}

impl EdgeKind {
    pub fn is_variable(self) -> bool {
        matches!(self, EdgeKind::Variable(_))
    }

    /// Edges that may carry parameter links to other edges.
    pub fn takes_params(self) -> bool {
        matches!(
            self,
            EdgeKind::Call
                | EdgeKind::Disguised
                | EdgeKind::Variable(VarMode::Call)
                | EdgeKind::Variable(VarMode::Disguised)
        )
    }

    /// Edges that may be the target of a parameter link.
    pub fn is_predicate_parameter(self) -> bool {
        matches!(
            self,
            EdgeKind::Disguised | EdgeKind::Variable(VarMode::Disguised)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: Symbol,
    pub kind: EdgeKind,
    /// Ordered tentacles.
    pub att: Vec<NodeId>,
    /// Links to predicate parameters (disguised edges at the same level).
    pub params: Vec<EdgeId>,
    /// Present iff `kind == Frame`.
    pub contents: Option<Box<Graph>>,
}

impl Edge {
    pub fn new(label: impl Into<Symbol>, kind: EdgeKind, att: Vec<NodeId>) -> Self {
        Edge {
            label: label.into(),
            kind,
            att,
            params: Vec::new(),
            contents: None,
        }
    }

    pub fn plain(label: impl Into<Symbol>, att: Vec<NodeId>) -> Self {
        Edge::new(label, EdgeKind::Plain, att)
    }

    pub fn frame(label: impl Into<Symbol>, att: Vec<NodeId>, contents: Graph) -> Self {
        Edge {
            contents: Some(Box::new(contents)),
            ..Edge::new(label, EdgeKind::Frame, att)
        }
    }

    pub fn var(name: impl Into<Symbol>, mode: VarMode, att: Vec<NodeId>) -> Self {
        Edge::new(name, EdgeKind::Variable(mode), att)
    }

    pub fn call(name: impl Into<Symbol>, att: Vec<NodeId>) -> Self {
        Edge::new(name, EdgeKind::Call, att)
    }

    pub fn disguised(name: impl Into<Symbol>, att: Vec<NodeId>) -> Self {
        Edge::new(name, EdgeKind::Disguised, att)
    }

    pub fn with_params(mut self, params: Vec<EdgeId>) -> Self {
        self.params = params;
        self
    }

    pub fn contents(&self) -> Option<&Graph> {
        self.contents.as_deref()
    }
}

/// One level of a hierarchical pointed hypergraph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<EdgeId, Edge>,
    points: Vec<NodeId>,
    /// Placeholder nodes standing for a node sequence of unknown length.
    spread: BTreeSet<NodeId>,
    next: u32,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self) -> u32 {
        let id = self.next;
        self.next += 1;
        id
    }

    pub fn add_node(&mut self) -> NodeId {
        let n = NodeId(self.fresh());
        self.nodes.insert(n);
        n
    }

    pub fn add_nodes(&mut self, k: usize) -> Vec<NodeId> {
        (0..k).map(|_| self.add_node()).collect()
    }

    pub fn add_spread_node(&mut self) -> NodeId {
        let n = self.add_node();
        self.spread.insert(n);
        n
    }

    pub fn add_edge(&mut self, edge: Edge) -> EdgeId {
        let e = EdgeId(self.fresh());
        self.edges.insert(e, edge);
        e
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<Edge> {
        self.edges.remove(&e)
    }

    /// Removes a node; attachments and points referring to it are left for the caller.
    pub fn remove_node(&mut self, n: NodeId) -> bool {
        self.spread.remove(&n);
        self.nodes.remove(&n)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().copied()
    }

    pub fn node_set(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(id, e)| (*id, e))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(&e)
    }

    pub fn edge_mut(&mut self, e: EdgeId) -> Option<&mut Edge> {
        self.edges.get_mut(&e)
    }

    pub fn contains_node(&self, n: NodeId) -> bool {
        self.nodes.contains(&n)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty() && self.points.is_empty()
    }

    pub fn points(&self) -> &[NodeId] {
        &self.points
    }

    pub fn set_points(&mut self, points: Vec<NodeId>) {
        self.points = points;
    }

    pub fn is_spread(&self, n: NodeId) -> bool {
        self.spread.contains(&n)
    }

    pub fn spread_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.spread.iter().copied()
    }

    pub fn has_spread(&self) -> bool {
        !self.spread.is_empty()
    }

    /// Identifier counter; every identifier in this level is below it.
    pub fn next_id(&self) -> u32 {
        self.next
    }

    /// Moves the identifier counter forward so the next allocation is at least `at`.
    pub fn reserve_ids(&mut self, at: u32) {
        self.next = self.next.max(at);
    }

    /// Inserts a node with a caller-chosen identifier.
    pub fn insert_node(&mut self, n: NodeId) {
        self.nodes.insert(n);
        self.next = self.next.max(n.0 + 1);
    }

    /// Inserts an edge with a caller-chosen identifier.
    pub fn insert_edge(&mut self, id: EdgeId, edge: Edge) {
        self.edges.insert(id, edge);
        self.next = self.next.max(id.0 + 1);
    }

    pub fn incident_edges(&self, n: NodeId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, e)| e.att.contains(&n))
            .map(|(id, _)| *id)
            .collect()
    }

    /// Number of tentacles touching `n`.
    pub fn degree(&self, n: NodeId) -> usize {
        self.edges
            .values()
            .map(|e| e.att.iter().filter(|&&a| a == n).count())
            .sum()
    }

    /// Nodes and edges at every depth.
    pub fn total_size(&self) -> usize {
        self.nodes.len()
            + self.edges.len()
            + self
                .edges
                .values()
                .filter_map(|e| e.contents())
                .map(Graph::total_size)
                .sum::<usize>()
    }

    /// Replaces `drop` by `keep` everywhere at this level and removes `drop`.
    pub fn merge_nodes(&mut self, keep: NodeId, drop: NodeId) {
        if keep == drop {
            return;
        }
        for e in self.edges.values_mut() {
            for a in &mut e.att {
                if *a == drop {
                    *a = keep;
                }
            }
        }
        for p in &mut self.points {
            if *p == drop {
                *p = keep;
            }
        }
        if self.spread.remove(&drop) {
            self.spread.insert(keep);
        }
        self.nodes.remove(&drop);
    }

    /// The contents graph reached by following a path of frame edges.
    pub fn level(&self, path: &[EdgeId]) -> Option<&Graph> {
        match path.split_first() {
            None => Some(self),
            Some((first, rest)) => self.edge(*first)?.contents()?.level(rest),
        }
    }

    pub fn level_mut(&mut self, path: &[EdgeId]) -> Option<&mut Graph> {
        match path.split_first() {
            None => Some(self),
            Some((first, rest)) => self
                .edge_mut(*first)?
                .contents
                .as_deref_mut()?
                .level_mut(rest),
        }
    }

    /// The edge followed by its parameter edges, transitively, in depth-first order.
    pub fn call_closure(&self, e: EdgeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![e];
        while let Some(x) = stack.pop() {
            if out.contains(&x) {
                continue;
            }
            out.push(x);
            if let Some(edge) = self.edge(x) {
                stack.extend(edge.params.iter().rev().copied());
            }
        }
        out
    }

    /// Attachments of a predicate edge followed by those of its parameters, recursively.
    pub fn call_points(&self, e: EdgeId) -> Vec<NodeId> {
        let mut seen = Vec::new();
        self.call_points_rec(e, &mut seen)
    }

    fn call_points_rec(&self, e: EdgeId, seen: &mut Vec<EdgeId>) -> Vec<NodeId> {
        if seen.contains(&e) {
            return Vec::new();
        }
        seen.push(e);
        let Some(edge) = self.edge(e) else {
            return Vec::new();
        };
        let mut out = edge.att.clone();
        for p in &edge.params {
            out.extend(self.call_points_rec(*p, seen));
        }
        out
    }

    /// Replaces a spread placeholder by `k` fresh nodes, splicing them into every attachment
    /// sequence and the point sequence.
    pub fn expand_spread(&mut self, node: NodeId, k: usize) -> Vec<NodeId> {
        let fresh = self.add_nodes(k);
        let splice = |seq: &mut Vec<NodeId>| {
            if seq.contains(&node) {
                let mut out = Vec::with_capacity(seq.len() + k);
                for &n in seq.iter() {
                    if n == node {
                        out.extend_from_slice(&fresh);
                    } else {
                        out.push(n);
                    }
                }
                *seq = out;
            }
        };
        for e in self.edges.values_mut() {
            splice(&mut e.att);
        }
        splice(&mut self.points);
        self.spread.remove(&node);
        self.nodes.remove(&node);
        fresh
    }

    /// Copies this level's nodes and edges into `target` with identifiers freshly allocated
    /// there. Frame contents are deep-copied. Returns the node and edge maps.
    pub fn copy_into(&self, target: &mut Graph) -> (BTreeMap<NodeId, NodeId>, BTreeMap<EdgeId, EdgeId>) {
        let mut nmap = BTreeMap::new();
        for &n in &self.nodes {
            let m = target.add_node();
            if self.spread.contains(&n) {
                target.spread.insert(m);
            }
            nmap.insert(n, m);
        }
        let mut emap = BTreeMap::new();
        for &e in self.edges.keys() {
            emap.insert(e, EdgeId(target.fresh()));
        }
        for (e, edge) in &self.edges {
            let copy = Edge {
                label: edge.label.clone(),
                kind: edge.kind,
                att: edge.att.iter().map(|a| nmap.get(a).copied().unwrap_or(*a)).collect(),
                params: edge.params.iter().map(|p| emap.get(p).copied().unwrap_or(*p)).collect(),
                contents: edge.contents().map(|c| Box::new(c.fresh_copy())),
            };
            target.edges.insert(emap[e], copy);
        }
        (nmap, emap)
    }

    /// An isomorphic copy whose identifiers (at every level) are disjoint from this graph's.
    pub fn fresh_copy(&self) -> Graph {
        let mut out = Graph {
            next: self.next,
            ..Graph::default()
        };
        let (nmap, _) = self.copy_into(&mut out);
        out.points = self.points.iter().map(|p| nmap[p]).collect();
        out
    }

    /// Every edge at every depth, with the frame path leading to its level.
    pub fn all_edges(&self) -> Vec<(Vec<EdgeId>, EdgeId, &Edge)> {
        let mut out = Vec::new();
        self.collect_edges(&mut Vec::new(), &mut out);
        out
    }

    fn collect_edges<'a>(&'a self, path: &mut Vec<EdgeId>, out: &mut Vec<(Vec<EdgeId>, EdgeId, &'a Edge)>) {
        for (id, e) in &self.edges {
            out.push((path.clone(), *id, e));
            if let Some(c) = e.contents() {
                path.push(*id);
                c.collect_edges(path, out);
                path.pop();
            }
        }
    }
}

fn path_string(path: &[EdgeId]) -> String {
    if path.is_empty() {
        "/".to_string()
    } else {
        path.iter().map(|e| format!("/{e}")).collect()
    }
}

/// Checks every structural invariant at every depth. Violations are data, never errors.
pub fn validate(g: &Graph) -> ValidationReport {
    let mut report = ValidationReport::new();
    validate_level(g, &mut Vec::new(), &mut Vec::new(), &mut report);
    report
}

fn validate_level<'a>(
    g: &'a Graph,
    path: &mut Vec<EdgeId>,
    ancestors: &mut Vec<&'a Graph>,
    report: &mut ValidationReport,
) {
    let here = path_string(path);
    for p in &g.points {
        if !g.contains_node(*p) {
            report.error(ViolationKind::UnknownNode, here.clone(), format!("point {p} is not a node"));
        }
    }
    for s in &g.spread {
        if !g.contains_node(*s) {
            report.error(ViolationKind::UnknownNode, here.clone(), format!("spread {s} is not a node"));
        }
    }
    for (id, e) in &g.edges {
        let at = format!("{}{}{id}", here, if path.is_empty() { "" } else { "/" });
        for a in &e.att {
            if g.contains_node(*a) {
                continue;
            }
            if ancestors.iter().any(|anc| anc.contains_node(*a)) {
                report.error(
                    ViolationKind::CrossFrameAttachment,
                    at.clone(),
                    format!("attachment {a} lies outside the edge's frame"),
                );
            } else {
                report.error(ViolationKind::UnknownNode, at.clone(), format!("attachment {a} is not a node"));
            }
        }
        match (e.kind == EdgeKind::Frame, e.contents.is_some()) {
            (true, false) => report.error(ViolationKind::FrameContents, at.clone(), "frame without contents"),
            (false, true) => report.error(ViolationKind::FrameContents, at.clone(), "non-frame edge with contents"),
            _ => {}
        }
        if !e.params.is_empty() && !e.kind.takes_params() {
            report.error(ViolationKind::BadParameter, at.clone(), "edge kind cannot take parameters");
        }
        for p in &e.params {
            match g.edge(*p) {
                None => report.error(ViolationKind::UnknownEdge, at.clone(), format!("parameter {p} is not an edge")),
                Some(_) if p == id => report.error(ViolationKind::BadParameter, at.clone(), "edge is its own parameter"),
                Some(pe) if !pe.kind.is_predicate_parameter() => report.error(
                    ViolationKind::BadParameter,
                    at.clone(),
                    format!("parameter {p} is not a disguised predicate edge"),
                ),
                _ => {}
            }
        }
        if let Some(c) = e.contents() {
            path.push(*id);
            ancestors.push(g);
            validate_level(c, path, ancestors, report);
            ancestors.pop();
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_is_valid() {
        assert!(validate(&Graph::new()).violations.is_empty());
    }

    #[test]
    fn cross_frame_attachment_is_reported_once() {
        let mut g = Graph::new();
        let outer = g.add_node();
        let mut inner = Graph::new();
        // keep inner ids clear of the outer node id
        inner.reserve_ids(10);
        let i = inner.add_node();
        inner.add_edge(Edge::plain("x", vec![i, outer]));
        g.add_edge(Edge::frame("F", vec![outer], inner));
        let r = validate(&g);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::CrossFrameAttachment);
    }

    #[test]
    fn frame_kind_and_contents_must_agree() {
        let mut g = Graph::new();
        let mut bad = Edge::plain("x", vec![]);
        bad.contents = Some(Box::new(Graph::new()));
        g.add_edge(bad);
        g.add_edge(Edge::new("F", EdgeKind::Frame, vec![]));
        assert_eq!(validate(&g).count(ViolationKind::FrameContents), 2);
    }

    #[test]
    fn fresh_copy_preserves_point_multiplicity() {
        let mut g = Graph::new();
        let n = g.add_node();
        g.set_points(vec![n, n]);
        let c = g.fresh_copy();
        assert_eq!(c.points().len(), 2);
        assert_eq!(c.points()[0], c.points()[1]);
        assert_ne!(c.points()[0], n);
        assert!(validate(&c).is_empty());
    }

    #[test]
    fn expand_spread_splices_sequences() {
        let mut g = Graph::new();
        let a = g.add_node();
        let s = g.add_spread_node();
        g.add_edge(Edge::call("p", vec![a, s, a]));
        g.set_points(vec![s, a]);
        let fresh = g.expand_spread(s, 2);
        let (_, e) = g.edges().next().unwrap();
        assert_eq!(e.att, vec![a, fresh[0], fresh[1], a]);
        assert_eq!(g.points(), &[fresh[0], fresh[1], a]);
        assert!(!g.has_spread());
    }

    #[test]
    fn call_points_follow_parameters() {
        let mut g = Graph::new();
        let [h, t] = [g.add_node(), g.add_node()];
        let r = g.add_edge(Edge::disguised("remove", vec![h, t]));
        let n = g.add_edge(Edge::call("normalize", vec![]).with_params(vec![r]));
        assert_eq!(g.call_points(n), vec![h, t]);
        assert_eq!(g.call_closure(n), vec![n, r]);
    }
}
