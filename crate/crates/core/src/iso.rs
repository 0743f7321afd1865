//! Isomorphism of hierarchical pointed hypergraphs by backtracking with label and degree pruning.

use std::collections::{BTreeMap, HashMap};

use crate::graph::{Edge, EdgeId, EdgeKind, Graph, NodeId};
use crate::symbol::Symbol;

/// A bijection between two graphs, with the bijections of corresponding frame contents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Isomorphism {
    pub nodes: BTreeMap<NodeId, NodeId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
    pub frames: BTreeMap<EdgeId, Isomorphism>,
}

type Signature = (EdgeKind, Symbol, usize, usize);

fn signature(e: &Edge) -> Signature {
    (e.kind, e.label.clone(), e.att.len(), e.params.len())
}

/// Decides whether `g` and `h` are equal up to the identity of their nodes and edges,
/// preserving labels, kinds, attachment order, points (positionally) and frame contents.
pub fn isomorphic(g: &Graph, h: &Graph) -> Option<Isomorphism> {
    if g.node_count() != h.node_count()
        || g.edge_count() != h.edge_count()
        || g.points().len() != h.points().len()
        || g.spread_nodes().count() != h.spread_nodes().count()
    {
        return None;
    }
    let mut gs: Vec<Signature> = g.edges().map(|(_, e)| signature(e)).collect();
    let mut hs: Vec<Signature> = h.edges().map(|(_, e)| signature(e)).collect();
    gs.sort();
    hs.sort();
    if gs != hs {
        return None;
    }

    let mut search = Search {
        g,
        h,
        gdeg: g.nodes().map(|n| (n, g.degree(n))).collect(),
        hdeg: h.nodes().map(|n| (n, h.degree(n))).collect(),
        nmap: BTreeMap::new(),
        nrev: BTreeMap::new(),
        emap: BTreeMap::new(),
        eused: BTreeMap::new(),
        frame_memo: HashMap::new(),
        order: Vec::new(),
    };
    for (a, b) in g.points().iter().zip(h.points()) {
        if !search.bind_node(*a, *b) {
            return None;
        }
    }
    search.order = edge_order(g, h);
    if !search.edges_from(0) {
        return None;
    }
    let mut frames = BTreeMap::new();
    for (ge, he) in &search.emap {
        if let Some(Some(iso)) = search.frame_memo.get(&(*ge, *he)) {
            frames.insert(*ge, iso.clone());
        }
    }
    Some(Isomorphism {
        nodes: search.nmap,
        edges: search.emap,
        frames,
    })
}

/// Orders `g`'s edges so that each one shares as many attachments as possible with earlier ones;
/// ties go to the rarest signature in `h`, then to identifier order.
fn edge_order(g: &Graph, h: &Graph) -> Vec<EdgeId> {
    let mut rarity: HashMap<Signature, usize> = HashMap::new();
    for (_, e) in h.edges() {
        *rarity.entry(signature(e)).or_default() += 1;
    }
    let mut seen: std::collections::BTreeSet<NodeId> = g.points().iter().copied().collect();
    let mut left: Vec<EdgeId> = g.edge_ids().collect();
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let e = g.edge(*id).expect("edge");
                let known = e.att.iter().filter(|a| seen.contains(a)).count();
                let rare = rarity.get(&signature(e)).copied().unwrap_or(0);
                (i, (std::cmp::Reverse(known), rare, *id))
            })
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("non-empty");
        let id = left.remove(pos);
        seen.extend(g.edge(id).expect("edge").att.iter().copied());
        order.push(id);
    }
    order
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    gdeg: HashMap<NodeId, usize>,
    hdeg: HashMap<NodeId, usize>,
    nmap: BTreeMap<NodeId, NodeId>,
    nrev: BTreeMap<NodeId, NodeId>,
    emap: BTreeMap<EdgeId, EdgeId>,
    eused: BTreeMap<EdgeId, EdgeId>,
    frame_memo: HashMap<(EdgeId, EdgeId), Option<Isomorphism>>,
    order: Vec<EdgeId>,
}

impl Search<'_> {
    fn bind_node(&mut self, a: NodeId, b: NodeId) -> bool {
        match (self.nmap.get(&a), self.nrev.get(&b)) {
            (Some(x), Some(y)) => *x == b && *y == a,
            (None, None) => {
                if self.gdeg.get(&a) != self.hdeg.get(&b) || self.g.is_spread(a) != self.h.is_spread(b) {
                    return false;
                }
                self.nmap.insert(a, b);
                self.nrev.insert(b, a);
                true
            }
            _ => false,
        }
    }

    fn frames_match(&mut self, ge: EdgeId, he: EdgeId) -> bool {
        if let Some(r) = self.frame_memo.get(&(ge, he)) {
            return r.is_some();
        }
        let gc = self.g.edge(ge).and_then(Edge::contents);
        let hc = self.h.edge(he).and_then(Edge::contents);
        let r = match (gc, hc) {
            (Some(a), Some(b)) => isomorphic(a, b),
            (None, None) => Some(Isomorphism::default()),
            _ => None,
        };
        let ok = r.is_some();
        self.frame_memo.insert((ge, he), r);
        ok
    }

    fn edges_from(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return self.finish_isolated() && self.params_agree();
        }
        let ge = self.order[i];
        let gedge = self.g.edge(ge).expect("edge");
        let sig = signature(gedge);
        let candidates: Vec<EdgeId> = self
            .h
            .edges()
            .filter(|(id, e)| !self.eused.contains_key(id) && signature(e) == sig)
            .map(|(id, _)| id)
            .collect();
        for he in candidates {
            let hatt = self.h.edge(he).expect("edge").att.clone();
            let saved_n = self.nmap.clone();
            let saved_r = self.nrev.clone();
            let ok = gedge
                .att
                .iter()
                .zip(&hatt)
                .all(|(a, b)| self.bind_node(*a, *b));
            if ok && (gedge.kind != EdgeKind::Frame || self.frames_match(ge, he)) {
                self.emap.insert(ge, he);
                self.eused.insert(he, ge);
                if self.edges_from(i + 1) {
                    return true;
                }
                self.emap.remove(&ge);
                self.eused.remove(&he);
            }
            self.nmap = saved_n;
            self.nrev = saved_r;
        }
        false
    }

    /// Isolated non-point nodes are interchangeable; pair them up by spread flag.
    fn finish_isolated(&mut self) -> bool {
        let gfree: Vec<NodeId> = self.g.nodes().filter(|n| !self.nmap.contains_key(n)).collect();
        let mut hfree: Vec<NodeId> = self.h.nodes().filter(|n| !self.nrev.contains_key(n)).collect();
        if gfree.len() != hfree.len() {
            return false;
        }
        let mut added = Vec::new();
        for a in gfree {
            let pos = hfree
                .iter()
                .position(|b| self.g.is_spread(a) == self.h.is_spread(*b) && self.gdeg[&a] == self.hdeg[b]);
            match pos {
                Some(p) => {
                    let b = hfree.remove(p);
                    self.nmap.insert(a, b);
                    self.nrev.insert(b, a);
                    added.push((a, b));
                }
                None => {
                    for (a, b) in added {
                        self.nmap.remove(&a);
                        self.nrev.remove(&b);
                    }
                    return false;
                }
            }
        }
        true
    }

    fn params_agree(&self) -> bool {
        self.emap.iter().all(|(ge, he)| {
            let gp = &self.g.edge(*ge).expect("edge").params;
            let hp = &self.h.edge(*he).expect("edge").params;
            gp.iter().zip(hp).all(|(a, b)| self.emap.get(a) == Some(b))
        })
    }
}
