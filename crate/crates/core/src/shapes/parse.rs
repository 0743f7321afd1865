//! Membership parsing for hyperedge-replacement shape grammars.
//!
//! The parser rewrites a sentential form top-down while embedding its terminal part into the
//! host graph. Failed states are memoized by their pending edges and the host elements they have
//! used up. A node-count cutoff bounds the search on large inputs.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use super::ShapeGrammar;
use crate::graph::{Edge, EdgeId, EdgeKind, Graph, NodeId, VarMode};
use crate::subst::replace_edge;
use crate::symbol::Symbol;

#[derive(Clone, Debug)]
pub struct ParseOptions {
    /// Hosts with more nodes than this are rejected without search.
    pub max_nodes: usize,
    /// Declared types of variable edges occurring in the host, by variable name.
    pub var_types: BTreeMap<Symbol, Symbol>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_nodes: 256,
            var_types: BTreeMap::new(),
        }
    }
}

/// How the edges of one sentential form were derived.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormDerivation {
    /// Sizes chosen for the form's spread placeholders, in point order.
    pub spreads: Vec<usize>,
    pub children: BTreeMap<EdgeId, Derivation>,
    pub frames: BTreeMap<EdgeId, FormDerivation>,
    /// Nonterminals covered by a typed variable of the host: variable name and mode.
    pub vars: BTreeMap<EdgeId, (Symbol, VarMode)>,
}

/// One nonterminal rewritten by one alternative of its type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub ty: Symbol,
    pub alternative: usize,
    pub body: FormDerivation,
}

impl Derivation {
    /// Indented text tree, one line per rewritten nonterminal or frame.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        let _ = writeln!(out, "{}{} #{}", "  ".repeat(depth), self.ty, self.alternative);
        self.body.write_text(depth + 1, out);
    }

    /// Number of rewriting steps in the tree, frame contents included.
    pub fn size(&self) -> usize {
        1 + self.body.size()
    }

    /// How often alternative `alt` of type `ty` was used.
    pub fn uses(&self, ty: &str, alt: usize) -> usize {
        usize::from(self.ty == ty && self.alternative == alt) + self.body.uses(ty, alt)
    }
}

impl FormDerivation {
    fn write_text(&self, depth: usize, out: &mut String) {
        let mut keys: BTreeSet<EdgeId> = self.children.keys().copied().collect();
        keys.extend(self.frames.keys());
        keys.extend(self.vars.keys());
        for k in keys {
            if let Some(d) = self.children.get(&k) {
                d.write_text(depth, out);
            }
            if let Some(f) = self.frames.get(&k) {
                let _ = writeln!(out, "{}frame {k}", "  ".repeat(depth));
                f.write_text(depth + 1, out);
            }
            if let Some((name, _)) = self.vars.get(&k) {
                let _ = writeln!(out, "{}var {name}", "  ".repeat(depth));
            }
        }
    }

    pub fn size(&self) -> usize {
        self.children.values().map(Derivation::size).sum::<usize>()
            + self.frames.values().map(FormDerivation::size).sum::<usize>()
    }

    pub fn uses(&self, ty: &str, alt: usize) -> usize {
        self.children.values().map(|d| d.uses(ty, alt)).sum::<usize>()
            + self.frames.values().map(|f| f.uses(ty, alt)).sum::<usize>()
    }
}

/// Whether a production edge stands for a nonterminal.
pub(crate) fn is_nonterminal(grammar: &ShapeGrammar, e: &Edge) -> bool {
    match e.kind {
        EdgeKind::Nonterminal => true,
        EdgeKind::Call | EdgeKind::Disguised => grammar.is_type(e.label.as_str()),
        _ => false,
    }
}

/// Spread placeholders of `g` in order of first occurrence among the points.
fn spread_order(g: &Graph) -> Vec<NodeId> {
    let mut out = Vec::new();
    for p in g.points() {
        if g.is_spread(*p) && !out.contains(p) {
            out.push(*p);
        }
    }
    for n in g.spread_nodes() {
        if !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

/// Every way to size the spreads of `g` so that it gets `arity` points.
fn spread_choices(g: &Graph, arity: usize) -> Vec<Vec<usize>> {
    let spreads = spread_order(g);
    let fixed = g.points().iter().filter(|p| !g.is_spread(**p)).count();
    if spreads.is_empty() {
        return if fixed == arity { vec![Vec::new()] } else { Vec::new() };
    }
    let per: Vec<usize> = spreads
        .iter()
        .map(|s| g.points().iter().filter(|p| *p == s).count())
        .collect();
    let mut out = Vec::new();
    fn rec(per: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == per.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = per[cur.len()];
        for k in 0..=left {
            if w == 0 && k > 0 {
                break;
            }
            if w * k > left {
                break;
            }
            cur.push(k);
            rec(per, left - w * k, cur, out);
            cur.pop();
        }
    }
    if arity >= fixed {
        rec(&per, arity - fixed, &mut Vec::new(), &mut out);
    }
    out
}

fn expand_spreads(g: &mut Graph, ks: &[usize]) {
    for (s, k) in spread_order(g).into_iter().zip(ks) {
        g.expand_spread(s, *k);
    }
}

/// Replaces a nonterminal edge by a production and restores call/disguise on the principal edge.
fn expand(g: &mut Graph, e: EdgeId, alt: &Graph) -> Option<crate::subst::Glued> {
    let kind = g.edge(e)?.kind;
    let glued = replace_edge(g, e, alt).ok()?;
    if matches!(kind, EdgeKind::Call | EdgeKind::Disguised) {
        let targets: BTreeSet<EdgeId> = alt.edges().flat_map(|(_, x)| x.params.iter().copied()).collect();
        for (a, x) in alt.edges() {
            if !targets.contains(&a) && matches!(x.kind, EdgeKind::Call | EdgeKind::Disguised) {
                g.edge_mut(glued.edges[&a])?.kind = kind;
            }
        }
    }
    Some(glued)
}

/// Rebuilds the graph derived from `form` along `d`.
pub fn replay(grammar: &ShapeGrammar, form: &Graph, d: &FormDerivation) -> Graph {
    let mut g = form.clone();
    expand_spreads(&mut g, &d.spreads);
    for (e, sub) in &d.frames {
        if let Some(edge) = g.edge_mut(*e) {
            if let Some(c) = edge.contents.as_deref_mut() {
                *c = replay(grammar, c, sub);
            }
        }
    }
    for (e, (name, mode)) in &d.vars {
        if let Some(edge) = g.edge_mut(*e) {
            edge.kind = EdgeKind::Variable(*mode);
            edge.label = name.clone();
        }
    }
    for (e, child) in &d.children {
        let alt = &grammar.alternatives(child.ty.as_str())[child.alternative];
        let r = replay(grammar, alt, &child.body);
        expand(&mut g, *e, &r);
    }
    g
}

/// Parses `host` as a graph of type `ty`.
pub fn parse(grammar: &ShapeGrammar, ty: &str, host: &Graph, opts: &ParseOptions) -> Option<Derivation> {
    let form = start_form(ty, host);
    let e = form.edge_ids().next().expect("start edge");
    let fd = parse_form(grammar, &form, host, opts)?;
    fd.children.get(&e).cloned()
}

/// Whether `host` is of type `ty`. Unlike [`parse`] this also holds for a host that is just a
/// variable of type `ty`, which has no derivation tree of its own.
pub fn conforms(grammar: &ShapeGrammar, ty: &str, host: &Graph, opts: &ParseOptions) -> bool {
    parse_form(grammar, &start_form(ty, host), host, opts).is_some()
}

/// The start graph: one `ty` edge attached to the host's points, in order.
pub(crate) fn start_form(ty: &str, host: &Graph) -> Graph {
    let mut form = Graph::new();
    let mut seen: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let att: Vec<NodeId> = host
        .points()
        .iter()
        .map(|p| *seen.entry(*p).or_insert_with(|| form.add_node()))
        .collect();
    form.add_edge(Edge::new(ty, EdgeKind::Nonterminal, att.clone()));
    form.set_points(att);
    form
}

/// Parses `host` against the sentential form `form`, whose points correspond to the host's.
pub fn parse_form(grammar: &ShapeGrammar, form: &Graph, host: &Graph, opts: &ParseOptions) -> Option<FormDerivation> {
    let ks = spread_choices(form, host.points().len());
    for k in ks {
        let mut f = form.clone();
        expand_spreads(&mut f, &k);
        if let Some(mut d) = Parser::new(grammar, host, None, opts).run(&f) {
            d.spreads = k;
            return Some(d);
        }
    }
    None
}

/// Parses the part of `host` made of `edges` against `form`, letting the form also match any
/// other edge of `host` without consuming it. Points are not bound.
pub(crate) fn parse_within(
    grammar: &ShapeGrammar,
    form: &Graph,
    host: &Graph,
    edges: &BTreeSet<EdgeId>,
    anchor: &[NodeId],
    opts: &ParseOptions,
) -> Option<FormDerivation> {
    let mut p = Parser::new(grammar, host, Some(edges), opts);
    p.anchor = anchor.to_vec();
    p.run(form)
}

enum Step {
    Expand {
        w: EdgeId,
        ty: Symbol,
        alt: usize,
        spreads: Vec<usize>,
        edges: BTreeMap<EdgeId, EdgeId>,
    },
    Frame {
        w: EdgeId,
        sub: FormDerivation,
    },
    Var {
        w: EdgeId,
        name: Symbol,
        mode: VarMode,
    },
}

#[derive(Clone)]
struct State {
    w: Graph,
    tags: BTreeMap<EdgeId, String>,
    nmap: BTreeMap<NodeId, NodeId>,
    hused: BTreeSet<NodeId>,
    eused: BTreeSet<EdgeId>,
    done: BTreeSet<EdgeId>,
    emap: BTreeMap<EdgeId, EdgeId>,
    expansions: usize,
}

struct Parser<'a> {
    grammar: &'a ShapeGrammar,
    host: &'a Graph,
    /// Edges that must be consumed; all others are ambient. `None`: all edges, strictly.
    consumable: Option<&'a BTreeSet<EdgeId>>,
    opts: &'a ParseOptions,
    anchor: Vec<NodeId>,
    failed: HashSet<String>,
    log: Vec<Step>,
    limit: usize,
}

impl<'a> Parser<'a> {
    fn new(grammar: &'a ShapeGrammar, host: &'a Graph, consumable: Option<&'a BTreeSet<EdgeId>>, opts: &'a ParseOptions) -> Self {
        Parser {
            grammar,
            host,
            consumable,
            opts,
            anchor: Vec::new(),
            failed: HashSet::new(),
            log: Vec::new(),
            limit: 2 * (host.node_count() + host.edge_count()) + 4,
        }
    }

    fn strict(&self) -> bool {
        self.consumable.is_none()
    }

    fn consumes(&self, e: EdgeId) -> bool {
        self.consumable.is_none_or(|c| c.contains(&e))
    }

    fn run(&mut self, form: &Graph) -> Option<FormDerivation> {
        if self.host.node_count() > self.opts.max_nodes {
            return None;
        }
        let mut st = State {
            w: form.clone(),
            tags: form.edge_ids().map(|e| (e, format!("s{}", e.0))).collect(),
            nmap: BTreeMap::new(),
            hused: BTreeSet::new(),
            eused: BTreeSet::new(),
            done: BTreeSet::new(),
            emap: BTreeMap::new(),
            expansions: 0,
        };
        let binds: Vec<(NodeId, NodeId)> = if self.strict() {
            if form.points().len() != self.host.points().len() {
                return None;
            }
            form.points().iter().copied().zip(self.host.points().iter().copied()).collect()
        } else {
            form.points().iter().copied().zip(self.anchor.iter().copied()).collect()
        };
        for (f, h) in binds {
            if !bind(&mut st, f, h) {
                return None;
            }
        }
        if !self.solve(st) {
            return None;
        }
        let identity: BTreeMap<EdgeId, EdgeId> = form.edge_ids().map(|e| (e, e)).collect();
        Some(self.build(&identity))
    }

    fn build(&self, edges: &BTreeMap<EdgeId, EdgeId>) -> FormDerivation {
        let mut fd = FormDerivation::default();
        for (a, w) in edges {
            for step in &self.log {
                match step {
                    Step::Expand { w: x, ty, alt, spreads, edges } if x == w => {
                        let mut body = self.build(edges);
                        body.spreads = spreads.clone();
                        fd.children.insert(
                            *a,
                            Derivation {
                                ty: ty.clone(),
                                alternative: *alt,
                                body,
                            },
                        );
                    }
                    Step::Frame { w: x, sub } if x == w => {
                        fd.frames.insert(*a, sub.clone());
                    }
                    Step::Var { w: x, name, mode } if x == w => {
                        fd.vars.insert(*a, (name.clone(), *mode));
                    }
                    _ => {}
                }
            }
        }
        fd
    }

    fn key(&self, st: &State) -> String {
        let mut placeholders: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut items: Vec<String> = Vec::new();
        for (id, e) in st.w.edges() {
            if st.done.contains(&id) {
                continue;
            }
            let mut s = format!("{}:{}:{:?}(", st.tags[&id], e.label, e.kind);
            for a in &e.att {
                match st.nmap.get(a) {
                    Some(h) => {
                        let _ = write!(s, "h{},", h.0);
                    }
                    None => {
                        let n = placeholders.len();
                        let k = *placeholders.entry(*a).or_insert(n);
                        let _ = write!(s, "p{k},");
                    }
                }
            }
            s.push(')');
            items.push(s);
        }
        items.sort();
        let mut key = items.join(";");
        let emap: Vec<(&String, &EdgeId)> = st.emap.iter().map(|(f, h)| (&st.tags[f], h)).collect();
        let _ = write!(key, "|{:?}|{:?}|{emap:?}", st.eused, st.hused);
        key
    }

    fn pending(&self, st: &State) -> Vec<EdgeId> {
        st.w.edge_ids().filter(|e| !st.done.contains(e)).collect()
    }

    fn solve(&mut self, st: State) -> bool {
        let pending = self.pending(&st);
        if pending.is_empty() {
            return self.finish(st);
        }
        if st.expansions > self.limit {
            return false;
        }
        let key = self.key(&st);
        if self.failed.contains(&key) {
            return false;
        }
        let mark = self.log.len();
        let grammar = self.grammar;
        let mapped = |e: EdgeId| {
            st.w.edge(e)
                .expect("edge")
                .att
                .iter()
                .filter(|a| st.nmap.contains_key(a))
                .count()
        };
        let terminal = pending
            .iter()
            .copied()
            .filter(|e| !is_nonterminal(grammar, st.w.edge(*e).expect("edge")))
            .max_by_key(|e| (mapped(*e), std::cmp::Reverse(*e)));
        let ok = match terminal {
            Some(fe) => self.match_terminal(&st, fe),
            None => {
                let fe = pending
                    .iter()
                    .copied()
                    .max_by_key(|e| (mapped(*e), std::cmp::Reverse(*e)))
                    .expect("pending");
                self.derive_nonterminal(&st, fe)
            }
        };
        if !ok {
            self.log.truncate(mark);
            self.failed.insert(key);
        }
        ok
    }

    fn candidates(&self, st: &State, fe: &Edge) -> Vec<EdgeId> {
        self.host
            .edges()
            .filter(|(id, he)| {
                !(self.consumes(*id) && st.eused.contains(id))
                    && he.att.len() == fe.att.len()
                    && he.params.len() == fe.params.len()
            })
            .map(|(id, _)| id)
            .collect()
    }

    fn take(&self, st: &State, fe_id: EdgeId, he_id: EdgeId) -> Option<State> {
        let fe = st.w.edge(fe_id).expect("edge");
        let he = self.host.edge(he_id).expect("edge");
        let mut next = st.clone();
        for (f, h) in fe.att.iter().zip(&he.att) {
            if !bind(&mut next, *f, *h) {
                return None;
            }
        }
        next.done.insert(fe_id);
        next.emap.insert(fe_id, he_id);
        if self.consumes(he_id) {
            next.eused.insert(he_id);
        }
        Some(next)
    }

    fn match_terminal(&mut self, st: &State, fe_id: EdgeId) -> bool {
        let fe = st.w.edge(fe_id).expect("edge").clone();
        for he_id in self.candidates(st, &fe) {
            let he = self.host.edge(he_id).expect("edge");
            let typed_frame_var = he.kind == EdgeKind::Variable(VarMode::Frame)
                && fe.kind == EdgeKind::Frame
                && self.opts.var_types.get(&he.label) == Some(&fe.label);
            if !typed_frame_var && (he.kind != fe.kind || he.label != fe.label) {
                continue;
            }
            let Some(next) = self.take(st, fe_id, he_id) else { continue };
            let mark = self.log.len();
            if fe.kind == EdgeKind::Frame && !typed_frame_var {
                let form_contents = fe.contents().cloned().unwrap_or_default();
                let wildcard = form_contents.node_count() == 0 && form_contents.edge_count() == 0;
                if !wildcard {
                    let Some(hc) = he.contents() else { continue };
                    match parse_form(self.grammar, &form_contents, hc, self.opts) {
                        Some(sub) => self.log.push(Step::Frame { w: fe_id, sub }),
                        None => continue,
                    }
                }
            }
            if typed_frame_var {
                self.log.push(Step::Var {
                    w: fe_id,
                    name: he.label.clone(),
                    mode: VarMode::Frame,
                });
            }
            if self.solve(next) {
                return true;
            }
            self.log.truncate(mark);
        }
        false
    }

    fn derive_nonterminal(&mut self, st: &State, fe_id: EdgeId) -> bool {
        let fe = st.w.edge(fe_id).expect("edge").clone();
        // a typed variable of the host stands for a whole derivation
        for he_id in self.candidates(st, &fe) {
            let he = self.host.edge(he_id).expect("edge");
            let EdgeKind::Variable(mode) = he.kind else { continue };
            let fits_mode = match fe.kind {
                EdgeKind::Call => mode == VarMode::Call,
                EdgeKind::Disguised => mode == VarMode::Disguised,
                _ => mode == VarMode::Graph,
            };
            if !fits_mode || self.opts.var_types.get(&he.label) != Some(&fe.label) {
                continue;
            }
            let Some(next) = self.take(st, fe_id, he_id) else { continue };
            let mark = self.log.len();
            self.log.push(Step::Var {
                w: fe_id,
                name: he.label.clone(),
                mode,
            });
            if self.solve(next) {
                return true;
            }
            self.log.truncate(mark);
        }
        let alts = self.grammar.alternatives(fe.label.as_str());
        for (i, alt) in alts.iter().enumerate() {
            for ks in spread_choices(alt, fe.att.len()) {
                let mut a = alt.clone();
                expand_spreads(&mut a, &ks);
                let mut next = st.clone();
                let Some(glued) = expand(&mut next.w, fe_id, &a) else { continue };
                if !apply_merges(&mut next, &glued.merged) {
                    continue;
                }
                let parent = next.tags.remove(&fe_id).expect("tag");
                for (ae, we) in &glued.edges {
                    next.tags.insert(*we, format!("{parent}/{i}:{}", ae.0));
                }
                next.expansions += 1;
                let mark = self.log.len();
                self.log.push(Step::Expand {
                    w: fe_id,
                    ty: fe.label.clone(),
                    alt: i,
                    spreads: ks,
                    edges: glued.edges.clone(),
                });
                if self.solve(next) {
                    return true;
                }
                self.log.truncate(mark);
            }
        }
        false
    }

    fn finish(&mut self, mut st: State) -> bool {
        if self.host.edge_ids().any(|e| self.consumes(e) && !st.eused.contains(&e)) {
            return false;
        }
        for (fe, he) in &st.emap {
            let fp = &st.w.edge(*fe).expect("edge").params;
            let hp = &self.host.edge(*he).expect("edge").params;
            if fp.iter().zip(hp).any(|(a, b)| st.emap.get(a) != Some(b)) {
                return false;
            }
        }
        // distinct form nodes that survived all identifications need distinct images
        let images: BTreeSet<NodeId> = st.nmap.values().copied().collect();
        if images.len() != st.nmap.len() {
            return false;
        }
        let unmapped: Vec<NodeId> = st.w.nodes().filter(|n| !st.nmap.contains_key(n)).collect();
        if self.strict() {
            let free: Vec<NodeId> = self.host.nodes().filter(|n| !st.hused.contains(n)).collect();
            if free.len() != unmapped.len() {
                return false;
            }
            for (f, h) in unmapped.into_iter().zip(free) {
                bind(&mut st, f, h);
            }
        }
        true
    }
}

fn bind(st: &mut State, f: NodeId, h: NodeId) -> bool {
    match st.nmap.get(&f) {
        Some(x) => *x == h,
        None => {
            st.nmap.insert(f, h);
            st.hused.insert(h);
            true
        }
    }
}

fn apply_merges(st: &mut State, merged: &[(NodeId, NodeId)]) -> bool {
    for (dropped, kept) in merged {
        if let Some(h) = st.nmap.remove(dropped) {
            match st.nmap.get(kept) {
                Some(x) if *x != h => return false,
                Some(_) => {}
                None => {
                    st.nmap.insert(*kept, h);
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::TypeTerm;

    pub(super) use super::tests_support::{chain, chains};
    #[test]
    fn chains_parse_and_replay() {
        let gr = chains();
        for k in 0..4 {
            let host = chain(k);
            let d = parse(&gr, "C", &host, &ParseOptions::default()).expect("chain parses");
            assert_eq!(d.uses("C", 1), k);
            let start = start_form("C", &host);
            let mut fd = FormDerivation::default();
            fd.children.insert(start.edge_ids().next().unwrap(), d);
            let back = replay(&gr, &start, &fd);
            assert!(crate::iso::isomorphic(&back, &host).is_some());
        }
    }

    #[test]
    fn extra_edges_and_wrong_points_are_rejected() {
        let gr = chains();
        let mut g = chain(2);
        let n = g.points()[0];
        g.add_edge(Edge::plain("a", vec![n, n]));
        assert!(parse(&gr, "C", &g, &ParseOptions::default()).is_none());
        let mut g = chain(2);
        let ps = g.points().to_vec();
        g.set_points(vec![ps[1], ps[0]]);
        assert!(parse(&gr, "C", &g, &ParseOptions::default()).is_none());
    }

    #[test]
    fn typed_variables_stand_for_derivations() {
        let gr = chains();
        let mut host = Graph::new();
        let [p, x, q] = [host.add_node(), host.add_node(), host.add_node()];
        host.add_edge(Edge::plain("a", vec![p, x]));
        host.add_edge(Edge::var("R", VarMode::Graph, vec![x, q]));
        host.set_points(vec![p, q]);
        let mut opts = ParseOptions::default();
        assert!(parse(&gr, "C", &host, &opts).is_none());
        opts.var_types.insert("R".into(), TypeTerm::atom("C").label());
        assert!(parse(&gr, "C", &host, &opts).is_some());
    }
}
#[cfg(test)]
mod tests_support {
    use super::*;
    use crate::shapes::ShapeType;
    /// Chains of `a`-edges: `C ::= • | a(p, x) C(x, q)`, with points (p, q).
    pub fn chains() -> ShapeGrammar {
        let mut g = ShapeGrammar::new();
        g.declare(ShapeType {
            name: "C".into(),
            arity: Some(2),
            type_params: vec![],
        });
        let mut base = Graph::new();
        let n = base.add_node();
        base.set_points(vec![n, n]);
        g.add_alternative("C", base);
        let mut step = Graph::new();
        let [p, x, q] = [step.add_node(), step.add_node(), step.add_node()];
        step.add_edge(Edge::plain("a", vec![p, x]));
        step.add_edge(Edge::new("C", EdgeKind::Nonterminal, vec![x, q]));
        step.set_points(vec![p, q]);
        g.add_alternative("C", step);
        g
    }

    pub fn chain(k: usize) -> Graph {
        let mut g = Graph::new();
        let first = g.add_node();
        let mut prev = first;
        for _ in 0..k {
            let n = g.add_node();
            g.add_edge(Edge::plain("a", vec![prev, n]));
            prev = n;
        }
        g.set_points(vec![first, prev]);
        g
    }

}
