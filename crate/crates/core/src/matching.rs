//! Rules, match enumeration and rule application.
//!
//! A match of a pattern `P` in a host `G` is a context `C` and a substitution `σ` with
//! `G ≅ C[Pσ]`. The context is kept implicit: a match records which host elements are covered
//! by `Pσ` and which host nodes the hole attaches to.
//!
//! Matching is injective on the nodes and edges of the pattern's non-variable part. Inside a
//! frame the pattern must account for the whole contents: a graph variable there binds whatever
//! is left, and the nodes it is attached to may be identified by its binding (this is how a list
//! pattern matches a list whose remainder is empty).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{validate, Edge, EdgeId, EdgeKind, Graph, NodeId, VarMode};
use crate::report::{ValidationReport, ViolationKind};
use crate::subst::{glue, instantiate, Context, Glued, SubstError, Substitution, HOLE};
use crate::symbol::Symbol;

/// The declared type of a rule variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarType {
    /// A shape type, written as its canonical label (`L<I>`).
    Shape(Symbol),
    /// A frame variable of the given frame label.
    Frame(Symbol),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Replacement {
    Graph(Graph),
    /// The failure marker: applying the rule makes the predicate call fail.
    Fail,
}

impl Replacement {
    pub fn graph(&self) -> Option<&Graph> {
        match self {
            Replacement::Graph(g) => Some(g),
            Replacement::Fail => None,
        }
    }
}

/// `name: P [] A → R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: Symbol,
    pub pattern: Graph,
    pub premise: Option<Graph>,
    pub replacement: Replacement,
    pub var_types: BTreeMap<Symbol, VarType>,
}

impl Rule {
    pub fn new(name: impl Into<Symbol>, pattern: Graph, replacement: Graph) -> Self {
        Rule {
            name: name.into(),
            pattern,
            premise: None,
            replacement: Replacement::Graph(replacement),
            var_types: BTreeMap::new(),
        }
    }

    pub fn with_premise(mut self, premise: Graph) -> Self {
        self.premise = Some(premise);
        self
    }

    /// Point positions of the pattern that hold a spread placeholder.
    pub fn spread_positions(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        self.pattern
            .points()
            .iter()
            .enumerate()
            .filter(|(_, n)| self.pattern.is_spread(**n) && seen.insert(**n))
            .map(|(i, _)| i)
            .collect()
    }

    /// Replaces the spread placeholders (in [`Rule::spread_positions`] order) by `ks[i]` nodes
    /// each, consistently in pattern, premise and replacement.
    pub fn expand(&self, ks: &[usize]) -> Rule {
        let positions = self.spread_positions();
        let mut out = self.clone();
        for (pos, k) in positions.iter().zip(ks).rev() {
            expand_at(&mut out.pattern, *pos, *k);
            if let Some(a) = out.premise.as_mut() {
                expand_at(a, *pos, *k);
            }
            if let Replacement::Graph(r) = &mut out.replacement {
                expand_at(r, *pos, *k);
            }
        }
        out
    }

    pub fn graphs(&self) -> impl Iterator<Item = (&'static str, &Graph)> {
        std::iter::once(("pattern", &self.pattern))
            .chain(self.premise.iter().map(|a| ("premise", a)))
            .chain(self.replacement.graph().map(|r| ("replacement", r)))
    }
}

fn expand_at(g: &mut Graph, pos: usize, k: usize) {
    if let Some(&n) = g.points().get(pos) {
        if g.is_spread(n) {
            g.expand_spread(n, k);
        }
    }
}

fn var_occurrences(g: &Graph) -> Vec<(Symbol, VarMode, usize, usize)> {
    // (name, mode, arity, depth)
    fn walk(g: &Graph, depth: usize, out: &mut Vec<(Symbol, VarMode, usize, usize)>) {
        for (_, e) in g.edges() {
            if let EdgeKind::Variable(m) = e.kind {
                out.push((e.label.clone(), m, e.att.len(), depth));
            }
            if let Some(c) = e.contents() {
                walk(c, depth + 1, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(g, 0, &mut out);
    out
}

fn graph_vars_per_level(g: &Graph, path: &mut Vec<EdgeId>, report: &mut ValidationReport, label: &str) {
    for (id, e) in g.edges() {
        if let Some(c) = e.contents() {
            let n = c
                .edges()
                .filter(|(_, x)| x.kind == EdgeKind::Variable(VarMode::Graph))
                .count();
            path.push(id);
            if n > 1 {
                let at: String = path.iter().map(|e| format!("/{e}")).collect();
                report.error(
                    ViolationKind::AmbiguousFrameContents,
                    format!("{label}{at}"),
                    format!("{n} graph variables in one frame"),
                );
            }
            graph_vars_per_level(c, path, report, label);
            path.pop();
        }
    }
}

/// Checks the rule invariants: variables of the replacement and premise occur in the pattern,
/// the pattern is linear, and all sides share one interface.
pub fn check_rule(r: &Rule) -> ValidationReport {
    let mut report = ValidationReport::new();
    let base = r.name.to_string();
    for (side, g) in r.graphs() {
        for v in validate(g).violations {
            report.error(v.kind, format!("{base}/{side}{}", v.path), v.message);
        }
    }

    let pvars = var_occurrences(&r.pattern);
    let mut seen: BTreeMap<Symbol, (VarMode, usize)> = BTreeMap::new();
    let mut reported = BTreeSet::new();
    for (name, mode, arity, depth) in &pvars {
        if seen.insert(name.clone(), (*mode, *arity)).is_some() && reported.insert(name.clone()) {
            report.error(
                ViolationKind::NonLinearPattern,
                format!("{base}/pattern"),
                format!("variable {name} occurs more than once"),
            );
        }
        if *depth == 0 && *mode == VarMode::Graph {
            report.error(
                ViolationKind::GraphVariableAtTopLevel,
                format!("{base}/pattern"),
                format!("graph variable {name} outside any frame"),
            );
        }
    }
    graph_vars_per_level(&r.pattern, &mut Vec::new(), &mut report, &format!("{base}/pattern"));

    let check_side = |side: &str, g: &Graph, unbound: ViolationKind, report: &mut ValidationReport| {
        let mut missing = BTreeSet::new();
        let mut inconsistent = BTreeSet::new();
        for (name, mode, arity, _) in var_occurrences(g) {
            match seen.get(&name) {
                None => {
                    missing.insert(name);
                }
                Some((m, a)) if *a != arity || !modes_compatible(*m, mode) => {
                    inconsistent.insert(name);
                }
                _ => {}
            }
        }
        for name in missing {
            report.error(unbound, format!("{base}/{side}"), format!("variable {name} does not occur in the pattern"));
        }
        for name in inconsistent {
            report.error(
                ViolationKind::InconsistentVariable,
                format!("{base}/{side}"),
                format!("variable {name} used with a different arity or kind than in the pattern"),
            );
        }
    };
    if let Some(a) = &r.premise {
        check_side("premise", a, ViolationKind::UnboundPremiseVariable, &mut report);
    }
    if let Replacement::Graph(rg) = &r.replacement {
        check_side("replacement", rg, ViolationKind::UnboundReplacementVariable, &mut report);
        let mut counts: BTreeMap<Symbol, usize> = BTreeMap::new();
        for (name, ..) in var_occurrences(rg) {
            *counts.entry(name).or_default() += 1;
        }
        for (name, n) in counts.into_iter().filter(|(_, n)| *n > 1) {
            report.info(
                ViolationKind::DuplicatedReplacementVariable,
                format!("{base}/replacement"),
                format!("variable {name} is copied {n} times"),
            );
        }
    }

    let spreads = |g: &Graph| -> Vec<bool> { g.points().iter().map(|p| g.is_spread(*p)).collect() };
    let pspread = spreads(&r.pattern);
    for (side, g) in r.graphs().skip(1) {
        if g.points().len() != r.pattern.points().len() {
            report.error(
                ViolationKind::InterfaceMismatch,
                format!("{base}/{side}"),
                format!("{} points, pattern has {}", g.points().len(), r.pattern.points().len()),
            );
        } else if spreads(g) != pspread {
            report.error(
                ViolationKind::InterfaceMismatch,
                format!("{base}/{side}"),
                "spread placeholders do not line up with the pattern",
            );
        }
    }
    report
}

fn modes_compatible(a: VarMode, b: VarMode) -> bool {
    a == b || matches!((a, b), (VarMode::Call | VarMode::Disguised, VarMode::Call | VarMode::Disguised))
}

/// A match of a pattern in a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    /// Frame path from the host root to the level containing the hole.
    pub path: Vec<EdgeId>,
    /// Pattern top-level nodes to host nodes (several pattern nodes never share an image here).
    pub nodes: BTreeMap<NodeId, NodeId>,
    /// Pattern top-level edges to host edges. Predicate variables map to the bound edge.
    pub edges: BTreeMap<EdgeId, EdgeId>,
    /// Host edges at the hole level that belong to `Pσ`.
    pub covered: BTreeSet<EdgeId>,
    /// Host nodes at the hole level that belong to `Pσ` but not to the context.
    pub internal: BTreeSet<NodeId>,
    /// Host nodes the hole is attached to, the images of the pattern's points.
    pub hole: Vec<NodeId>,
    pub substitution: Substitution,
}

impl Match {
    /// The context `C[ ]` with `host ≅ C[Pσ]`.
    pub fn context(&self, host: &Graph) -> Context {
        let mut g = host.clone();
        let level = g.level_mut(&self.path).expect("match path");
        for e in &self.covered {
            level.remove_edge(*e);
        }
        for n in &self.internal {
            level.remove_node(*n);
        }
        level.add_edge(Edge::var(HOLE, VarMode::Graph, self.hole.clone()));
        Context::new(g).expect("host graphs carry no variables")
    }

    /// One-line description used in traces.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for e in &self.path {
            s.push_str(&format!("{e}/"));
        }
        let hole: Vec<String> = self.hole.iter().map(|n| n.to_string()).collect();
        let edges: Vec<String> = self.covered.iter().map(|e| e.to_string()).collect();
        s.push_str(&format!("[{}] {{{}}}", hole.join(","), edges.join(",")));
        s
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApplyError {
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error("the rule's replacement is the failure marker")]
    FailReplacement,
    #[error("match does not address a level of the host")]
    BadPath,
}

/// Every match of `pattern` in `host`, with the hole at the top level or inside any frame.
/// Top-level matches come first, then nested levels in frame-identifier order.
pub fn enumerate_matches(host: &Graph, pattern: &Graph) -> Vec<Match> {
    let mut out = Vec::new();
    enumerate_rec(host, pattern, &mut Vec::new(), &mut out);
    out
}

fn enumerate_rec(level: &Graph, pattern: &Graph, path: &mut Vec<EdgeId>, out: &mut Vec<Match>) {
    out.extend(level_matches(level, pattern, path, None));
    for (id, e) in level.edges() {
        if let Some(c) = e.contents() {
            path.push(id);
            enumerate_rec(c, pattern, path, out);
            path.pop();
        }
    }
}

/// Matches at the top level of `host` that map `pattern_edge` onto `host_edge`.
pub fn enumerate_pinned(host: &Graph, pattern: &Graph, pattern_edge: EdgeId, host_edge: EdgeId) -> Vec<Match> {
    level_matches(host, pattern, &[], Some((pattern_edge, host_edge)))
}

fn level_matches(level: &Graph, pattern: &Graph, path: &[EdgeId], pin: Option<(EdgeId, EdgeId)>) -> Vec<Match> {
    let mut search = LevelSearch::new(pattern, level, false, pin);
    search.run();
    search
        .out
        .into_iter()
        .map(|m| {
            let points: BTreeSet<NodeId> = pattern.points().iter().copied().collect();
            let internal = pattern
                .nodes()
                .filter(|n| !points.contains(n))
                .map(|n| m.nodes[&n])
                .collect();
            Match {
                path: path.to_vec(),
                hole: pattern.points().iter().map(|p| m.nodes[p]).collect(),
                nodes: m.nodes,
                edges: m.edges,
                covered: m.covered,
                internal,
                substitution: m.bindings.into_iter().collect(),
            }
        })
        .collect()
}

/// All ways in which `pattern` accounts for the whole of `host` (used for frame contents).
/// Returns the variable bindings of each way.
pub fn total_matches(pattern: &Graph, host: &Graph) -> Vec<Substitution> {
    let mut search = LevelSearch::new(pattern, host, true, None);
    search.run();
    search
        .out
        .into_iter()
        .map(|m| m.bindings.into_iter().collect())
        .collect()
}

/// The subgraph of `g` with the given nodes and edges, keeping identifiers.
fn extract(g: &Graph, nodes: impl IntoIterator<Item = NodeId>, edges: &[EdgeId], points: Vec<NodeId>) -> Graph {
    let mut out = Graph::new();
    for n in nodes {
        out.insert_node(n);
    }
    for e in edges {
        let edge = g.edge(*e).expect("edge").clone();
        for a in &edge.att {
            out.insert_node(*a);
        }
        out.insert_edge(*e, edge);
    }
    for p in &points {
        out.insert_node(*p);
    }
    out.set_points(points);
    out
}

/// The binding of a predicate variable: the edge with its parameters, pointed by its call points.
fn predicate_binding(host: &Graph, e: EdgeId) -> Graph {
    let closure = host.call_closure(e);
    extract(host, [], &closure, host.call_points(e))
}

struct LevelMatch {
    nodes: BTreeMap<NodeId, NodeId>,
    edges: BTreeMap<EdgeId, EdgeId>,
    covered: BTreeSet<EdgeId>,
    bindings: Vec<(Symbol, Graph)>,
}

struct LevelSearch<'a> {
    pat: &'a Graph,
    host: &'a Graph,
    total: bool,
    /// The graph variable that takes the rest of a frame's contents.
    rest_var: Option<EdgeId>,
    /// Pattern nodes that may share an image (all attached to `rest_var`).
    mergeable: BTreeSet<NodeId>,
    order: Vec<EdgeId>,
    free_nodes: Vec<NodeId>,
    nmap: BTreeMap<NodeId, NodeId>,
    emap: BTreeMap<EdgeId, EdgeId>,
    covered: BTreeSet<EdgeId>,
    bindings: Vec<(Symbol, Graph)>,
    frame_cache: HashMap<(EdgeId, EdgeId), Vec<Substitution>>,
    pin: Option<(EdgeId, EdgeId)>,
    out: Vec<LevelMatch>,
}

fn compatible_kind(pattern: &Edge, host: &Edge, total: bool) -> bool {
    match pattern.kind {
        EdgeKind::Variable(VarMode::Frame) => host.kind == EdgeKind::Frame,
        EdgeKind::Variable(VarMode::Call) => host.kind == EdgeKind::Call,
        EdgeKind::Variable(VarMode::Disguised) => host.kind == EdgeKind::Disguised,
        EdgeKind::Variable(VarMode::Graph) => !total && matches!(host.kind, EdgeKind::Plain | EdgeKind::Frame),
        k => {
            k == host.kind
                && pattern.label == host.label
                && pattern.att.len() == host.att.len()
                && pattern.params.len() == host.params.len()
        }
    }
}

impl<'a> LevelSearch<'a> {
    fn new(pat: &'a Graph, host: &'a Graph, total: bool, pin: Option<(EdgeId, EdgeId)>) -> Self {
        let rest_var = if total {
            pat.edges()
                .find(|(_, e)| e.kind == EdgeKind::Variable(VarMode::Graph))
                .map(|(id, _)| id)
        } else {
            None
        };
        let mergeable = rest_var
            .and_then(|v| pat.edge(v))
            .map(|e| e.att.iter().copied().collect())
            .unwrap_or_default();
        LevelSearch {
            pat,
            host,
            total,
            rest_var,
            mergeable,
            order: Vec::new(),
            free_nodes: Vec::new(),
            nmap: BTreeMap::new(),
            emap: BTreeMap::new(),
            covered: BTreeSet::new(),
            bindings: Vec::new(),
            frame_cache: HashMap::new(),
            pin,
            out: Vec::new(),
        }
    }

    fn run(&mut self) {
        if self.total {
            if self.pat.points().len() != self.host.points().len() {
                return;
            }
            let pairs: Vec<(NodeId, NodeId)> = self
                .pat
                .points()
                .iter()
                .copied()
                .zip(self.host.points().iter().copied())
                .collect();
            for (p, h) in pairs {
                if self.bind_node(p, h).is_none() {
                    return;
                }
            }
        }
        self.order = self.edge_order();
        let attached: BTreeSet<NodeId> = self
            .order
            .iter()
            .flat_map(|e| self.pat.edge(*e).expect("edge").att.iter().copied())
            .collect();
        self.free_nodes = self
            .pat
            .nodes()
            .filter(|n| !attached.contains(n) && !self.nmap.contains_key(n))
            .collect();
        self.edges_from(0);
    }

    fn edge_order(&self) -> Vec<EdgeId> {
        let mut rarity: HashMap<(EdgeKind, Symbol), usize> = HashMap::new();
        for (_, e) in self.host.edges() {
            *rarity.entry((e.kind, e.label.clone())).or_default() += 1;
        }
        let mut seen: BTreeSet<NodeId> = self.nmap.keys().copied().collect();
        let mut left: Vec<EdgeId> = self
            .pat
            .edge_ids()
            .filter(|e| Some(*e) != self.rest_var)
            .collect();
        let mut order = Vec::new();
        if let Some((pe, _)) = self.pin {
            if let Some(pos) = left.iter().position(|e| *e == pe) {
                left.remove(pos);
                order.push(pe);
                seen.extend(self.pat.edge(pe).expect("edge").att.iter().copied());
            }
        }
        while !left.is_empty() {
            let pos = (0..left.len())
                .min_by_key(|&i| {
                    let e = self.pat.edge(left[i]).expect("edge");
                    let known = e.att.iter().filter(|a| seen.contains(a)).count();
                    let rare = if e.kind.is_variable() {
                        usize::MAX
                    } else {
                        rarity.get(&(e.kind, e.label.clone())).copied().unwrap_or(0)
                    };
                    (std::cmp::Reverse(known), rare, left[i])
                })
                .expect("non-empty");
            let id = left.remove(pos);
            seen.extend(self.pat.edge(id).expect("edge").att.iter().copied());
            order.push(id);
        }
        order
    }

    /// Binds a pattern node; returns whether the binding is new (`Some(true)`), already present
    /// (`Some(false)`), or impossible (`None`).
    fn bind_node(&mut self, p: NodeId, h: NodeId) -> Option<bool> {
        if let Some(x) = self.nmap.get(&p) {
            return (*x == h).then_some(false);
        }
        if self.pat.is_spread(p) != self.host.is_spread(h) {
            return None;
        }
        let sharing: Vec<NodeId> = self.nmap.iter().filter(|(_, v)| **v == h).map(|(k, _)| *k).collect();
        if !sharing.is_empty() {
            let ok = self.total && self.mergeable.contains(&p) && sharing.iter().all(|s| self.mergeable.contains(s));
            if !ok {
                return None;
            }
        }
        self.nmap.insert(p, h);
        Some(true)
    }

    fn bind_all(&mut self, ps: &[NodeId], hs: &[NodeId]) -> Option<Vec<NodeId>> {
        if ps.len() != hs.len() {
            return None;
        }
        let mut added = Vec::new();
        for (p, h) in ps.iter().zip(hs) {
            match self.bind_node(*p, *h) {
                Some(true) => added.push(*p),
                Some(false) => {}
                None => {
                    for a in added {
                        self.nmap.remove(&a);
                    }
                    return None;
                }
            }
        }
        Some(added)
    }

    fn edges_from(&mut self, i: usize) {
        if i == self.order.len() {
            self.nodes_from(0);
            return;
        }
        let pe = self.order[i];
        let pedge = self.pat.edge(pe).expect("edge");
        let candidates: Vec<EdgeId> = match self.pin {
            Some((p, h)) if p == pe => vec![h],
            _ => self.host.edge_ids().collect(),
        };
        for he in candidates {
            if self.covered.contains(&he) {
                continue;
            }
            let Some(hedge) = self.host.edge(he) else { continue };
            if !compatible_kind(pedge, hedge, self.total) {
                continue;
            }
            match pedge.kind {
                EdgeKind::Variable(mode @ (VarMode::Call | VarMode::Disguised)) => {
                    let _ = mode;
                    let closure = self.host.call_closure(he);
                    if closure.iter().any(|c| self.covered.contains(c)) {
                        continue;
                    }
                    let points = self.host.call_points(he);
                    let Some(added) = self.bind_all(&pedge.att, &points) else { continue };
                    self.covered.extend(closure.iter().copied());
                    self.emap.insert(pe, he);
                    self.bindings.push((pedge.label.clone(), predicate_binding(self.host, he)));
                    self.edges_from(i + 1);
                    self.bindings.pop();
                    self.emap.remove(&pe);
                    for c in &closure {
                        self.covered.remove(c);
                    }
                    self.unbind(added);
                }
                EdgeKind::Variable(_) => {
                    let Some(added) = self.bind_all(&pedge.att, &hedge.att) else { continue };
                    self.covered.insert(he);
                    self.emap.insert(pe, he);
                    let g = extract(self.host, [], &[he], hedge.att.clone());
                    self.bindings.push((pedge.label.clone(), g));
                    self.edges_from(i + 1);
                    self.bindings.pop();
                    self.emap.remove(&pe);
                    self.covered.remove(&he);
                    self.unbind(added);
                }
                _ => {
                    let Some(added) = self.bind_all(&pedge.att, &hedge.att) else { continue };
                    self.covered.insert(he);
                    self.emap.insert(pe, he);
                    if pedge.kind == EdgeKind::Frame {
                        let ways = self.frame_ways(pe, he);
                        for way in ways {
                            let n = way.len();
                            self.bindings.extend(way.iter().map(|(k, v)| (k.clone(), v.clone())));
                            self.edges_from(i + 1);
                            self.bindings.truncate(self.bindings.len() - n);
                        }
                    } else {
                        self.edges_from(i + 1);
                    }
                    self.emap.remove(&pe);
                    self.covered.remove(&he);
                    self.unbind(added);
                }
            }
        }
    }

    fn frame_ways(&mut self, pe: EdgeId, he: EdgeId) -> Vec<Substitution> {
        if let Some(w) = self.frame_cache.get(&(pe, he)) {
            return w.clone();
        }
        let pc = self.pat.edge(pe).and_then(Edge::contents);
        let hc = self.host.edge(he).and_then(Edge::contents);
        let ways = match (pc, hc) {
            (Some(p), Some(h)) => total_matches(p, h),
            _ => Vec::new(),
        };
        self.frame_cache.insert((pe, he), ways.clone());
        ways
    }

    fn unbind(&mut self, added: Vec<NodeId>) {
        for a in added {
            self.nmap.remove(&a);
        }
    }

    fn nodes_from(&mut self, j: usize) {
        if j == self.free_nodes.len() {
            self.finish();
            return;
        }
        let p = self.free_nodes[j];
        let hosts: Vec<NodeId> = self.host.nodes().collect();
        for h in hosts {
            if let Some(new) = self.bind_node(p, h) {
                self.nodes_from(j + 1);
                if new {
                    self.nmap.remove(&p);
                }
            }
        }
    }

    fn finish(&mut self) {
        let images: BTreeSet<NodeId> = self.nmap.values().copied().collect();
        // Parameter links of literal pattern edges must land on the images of their targets.
        for (pe, he) in &self.emap {
            let pedge = self.pat.edge(*pe).expect("edge");
            if pedge.kind.is_variable() {
                continue;
            }
            let hedge = self.host.edge(*he).expect("edge");
            if pedge.params.iter().zip(&hedge.params).any(|(a, b)| self.emap.get(a) != Some(b)) {
                return;
            }
        }
        // No link from the rest of the host into the matched part.
        for (id, e) in self.host.edges() {
            if !self.covered.contains(&id) && e.params.iter().any(|p| self.covered.contains(p)) {
                return;
            }
        }

        let mut bindings = self.bindings.clone();
        if self.total {
            let rest_att: Vec<NodeId> = self
                .rest_var
                .map(|v| self.pat.edge(v).expect("edge").att.iter().map(|a| self.nmap[a]).collect())
                .unwrap_or_default();
            let rest_nodes: Vec<NodeId> = self.host.nodes().filter(|n| !images.contains(n)).collect();
            let rest_edges: Vec<EdgeId> = self.host.edge_ids().filter(|e| !self.covered.contains(e)).collect();
            match self.rest_var {
                None => {
                    if !rest_nodes.is_empty() || !rest_edges.is_empty() {
                        return;
                    }
                }
                Some(v) => {
                    let allowed: BTreeSet<NodeId> = rest_nodes.iter().chain(&rest_att).copied().collect();
                    for e in &rest_edges {
                        if !self.host.edge(*e).expect("edge").att.iter().all(|a| allowed.contains(a)) {
                            return;
                        }
                    }
                    if rest_nodes.iter().any(|n| self.host.points().contains(n)) {
                        return;
                    }
                    let name = self.pat.edge(v).expect("edge").label.clone();
                    bindings.push((name, extract(self.host, rest_nodes, &rest_edges, rest_att)));
                }
            }
        } else {
            let points: BTreeSet<NodeId> = self.pat.points().iter().copied().collect();
            for p in self.pat.nodes().filter(|n| !points.contains(n)) {
                let h = self.nmap[&p];
                if self.host.points().contains(&h) {
                    return;
                }
                if self.host.incident_edges(h).iter().any(|e| !self.covered.contains(e)) {
                    return;
                }
            }
        }
        self.out.push(LevelMatch {
            nodes: self.nmap.clone(),
            edges: self.emap.clone(),
            covered: self.covered.clone(),
            bindings,
        });
    }
}

/// Removes `Pσ` from the addressed level and glues each graph of `parts` (already instantiated)
/// at the hole. Returns the glue records in order.
pub fn rewrite_at(host: &mut Graph, m: &Match, parts: &[&Graph]) -> Result<Vec<Glued>, ApplyError> {
    let level = host.level_mut(&m.path).ok_or(ApplyError::BadPath)?;
    for e in &m.covered {
        level.remove_edge(*e);
    }
    for n in &m.internal {
        level.remove_node(*n);
    }
    let mut hole = m.hole.clone();
    let mut out = Vec::new();
    for part in parts {
        if part.points().len() != hole.len() {
            return Err(SubstError::ArityMismatch {
                name: Symbol::new(HOLE),
                attachments: hole.len(),
                points: part.points().len(),
            }
            .into());
        }
        let glued = glue(level, part, &hole);
        for (dropped, kept) in &glued.merged {
            for h in hole.iter_mut() {
                if h == dropped {
                    *h = *kept;
                }
            }
        }
        out.push(glued);
    }
    Ok(out)
}

/// `C[Rσ]` for a match of the rule's pattern. Elements outside the match keep their identifiers.
pub fn apply(host: &Graph, r: &Rule, m: &Match) -> Result<Graph, ApplyError> {
    let rg = r.replacement.graph().ok_or(ApplyError::FailReplacement)?;
    let inst = instantiate(rg, &m.substitution)?;
    let mut out = host.clone();
    rewrite_at(&mut out, m, &[&inst])?;
    Ok(out)
}

/// `A ⊕ R`: the disjoint union of two graphs identifying only their corresponding points.
pub fn premise_union(a: &Graph, r: &Graph) -> Result<Graph, SubstError> {
    if a.points().len() != r.points().len() {
        return Err(SubstError::ArityMismatch {
            name: Symbol::new("premise"),
            attachments: a.points().len(),
            points: r.points().len(),
        });
    }
    let mut out = a.clone();
    let points = out.points().to_vec();
    glue(&mut out, r, &points);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::isomorphic;
    use crate::subst::plug;

    fn single_node() -> Graph {
        let mut p = Graph::new();
        let n = p.add_node();
        p.set_points(vec![n]);
        p
    }

    #[test]
    fn single_node_pattern_matches_each_node() {
        let mut host = Graph::new();
        host.add_nodes(3);
        assert_eq!(enumerate_matches(&host, &single_node()).len(), 3);
    }

    #[test]
    fn non_point_nodes_obey_the_dangling_condition() {
        let mut host = Graph::new();
        let [a, b] = [host.add_node(), host.add_node()];
        host.add_edge(Edge::plain("x", vec![a, b]));
        let mut p = Graph::new();
        p.add_node();
        // only the node without further edges could be deleted; both have one
        assert!(enumerate_matches(&host, &p).is_empty());
    }

    #[test]
    fn every_match_is_sound() {
        let mut host = Graph::new();
        let ns = host.add_nodes(3);
        for i in 0..3 {
            host.add_edge(Edge::plain("x", vec![ns[i], ns[(i + 1) % 3]]));
        }
        let mut p = Graph::new();
        let [a, b] = [p.add_node(), p.add_node()];
        p.add_edge(Edge::plain("x", vec![a, b]));
        p.set_points(vec![a, b]);
        let ms = enumerate_matches(&host, &p);
        assert_eq!(ms.len(), 3);
        for m in ms {
            let back = plug(&m.context(&host), &instantiate(&p, &m.substitution).unwrap()).unwrap();
            assert!(isomorphic(&back, &host).is_some());
        }
    }

    #[test]
    fn identity_rule_leaves_host_unchanged() {
        let mut host = Graph::new();
        host.add_node();
        let r = Rule::new("id", single_node(), single_node());
        let m = &enumerate_matches(&host, &r.pattern)[0];
        assert!(isomorphic(&apply(&host, &r, m).unwrap(), &host).is_some());
    }

    #[test]
    fn check_rule_flags_unbound_and_non_linear() {
        let mut p = Graph::new();
        let a = p.add_node();
        p.set_points(vec![a]);
        let mut r = Graph::new();
        let b = r.add_node();
        r.add_edge(Edge::var("Y", VarMode::Frame, vec![b]));
        r.set_points(vec![b]);
        let rule = Rule::new("t", p.clone(), r);
        assert_eq!(check_rule(&rule).count(ViolationKind::UnboundReplacementVariable), 1);

        let mut p2 = p.clone();
        p2.add_edge(Edge::var("X", VarMode::Frame, vec![a]));
        p2.add_edge(Edge::var("X", VarMode::Frame, vec![a]));
        let rule = Rule::new("t", p2, p);
        assert_eq!(check_rule(&rule).count(ViolationKind::NonLinearPattern), 1);
    }

    #[test]
    fn premise_union_identifies_points_only() {
        let mut a = Graph::new();
        let [x, y] = [a.add_node(), a.add_node()];
        a.add_edge(Edge::plain("p", vec![x, y]));
        a.set_points(vec![x, y]);
        let mut r = Graph::new();
        let [u, v] = [r.add_node(), r.add_node()];
        r.add_edge(Edge::plain("q", vec![u, v]));
        r.set_points(vec![u, v]);
        let g = premise_union(&a, &r).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 2));
        assert!(premise_union(&a, &single_node()).is_err());
    }

    #[test]
    fn rest_variable_may_identify_its_attachments() {
        // contents: points (p, q) with p == q, pattern: points (u, v), L(u, v)
        let mut host = Graph::new();
        let n = host.add_node();
        host.set_points(vec![n, n]);
        let mut pat = Graph::new();
        let [u, v] = [pat.add_node(), pat.add_node()];
        pat.add_edge(Edge::var("L", VarMode::Graph, vec![u, v]));
        pat.set_points(vec![u, v]);
        let ways = total_matches(&pat, &host);
        assert_eq!(ways.len(), 1);
        let l = ways[0].get("L").unwrap();
        assert_eq!(l.node_count(), 1);
        assert_eq!(l.points().len(), 2);
    }
}
