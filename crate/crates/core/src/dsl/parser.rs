use std::collections::BTreeMap;

use super::lexer::{lex, Tok, Token};
use super::{DslError, STDLIB};
use crate::graph::{Edge, EdgeId, EdgeKind, Graph, NodeId, VarMode};
use crate::matching::{Replacement, Rule, VarType};
use crate::program::{Arity, ClassDecl, FrameDecl, NamedGraph, Otherwise, Predicate, Program, Visibility};
use crate::shapes::{ShapeType, TypeTerm, PI};
use crate::symbol::Symbol;

type Pos = (usize, usize);
/// An edge whose parameter names are resolved once the enclosing body is complete.
type PendingParams = (EdgeId, Vec<(String, Pos)>);

/// Parses a program file. `import stdlib;` pulls in the shipped combinators.
pub fn parse_program(src: &str) -> Result<Program, DslError> {
    let mut b = Builder::default();
    b.items(src)?;
    b.finish()
}

/// Parses the statements of a single graph body (without the enclosing braces).
pub fn parse_graph(src: &str) -> Result<NamedGraph, DslError> {
    let mut p = Cursor::new(lex(src)?);
    let body = p.statements(true, None)?;
    p.expect_eof()?;
    Ok(NamedGraph {
        graph: body.graph,
        nodes: body.nodes,
        edges: body.edges,
    })
}

struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

#[derive(Default)]
struct Body {
    graph: Graph,
    nodes: BTreeMap<String, NodeId>,
    edges: BTreeMap<String, EdgeId>,
    has_points: bool,
    var_types: Vec<(Symbol, VarType, Pos)>,
    /// Labels of non-variable calls, for name resolution.
    calls: Vec<(String, Pos)>,
}

impl Cursor {
    fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> Pos {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        let (l, c) = self.here();
        Err(DslError::syntax(l, c, msg))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), DslError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", describe(self.peek())))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), DslError> {
        let pos = self.here();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok((s, pos))
            }
            t => self.err(format!("expected a name, found {}", describe(&t))),
        }
    }

    fn number(&mut self) -> Result<usize, DslError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            t => self.err(format!("expected a number, found {}", describe(&t))),
        }
    }

    fn expect_eof(&self) -> Result<(), DslError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err(format!("unexpected {}", describe(self.peek())))
        }
    }

    /// `(k)` or `(..)`.
    fn arity(&mut self) -> Result<Option<usize>, DslError> {
        self.expect("(")?;
        let a = if self.eat("..") { None } else { Some(self.number()?) };
        self.expect(")")?;
        Ok(a)
    }

    fn type_term(&mut self) -> Result<TypeTerm, DslError> {
        let (name, _) = self.ident()?;
        let mut args = Vec::new();
        if self.eat("<") {
            loop {
                args.push(self.type_term()?);
                if self.eat(">") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(TypeTerm::apply(name, args))
    }

    fn body(&mut self, points_allowed: bool) -> Result<Body, DslError> {
        self.expect("{")?;
        let b = self.statements(points_allowed, Some("}"))?;
        self.expect("}")?;
        Ok(b)
    }

    fn statements(&mut self, points_allowed: bool, end: Option<&str>) -> Result<Body, DslError> {
        let mut b = Body::default();
        let mut params: Vec<(EdgeId, Vec<(String, Pos)>)> = Vec::new();
        loop {
            match end {
                Some(e) if self.is_punct(e) => break,
                None if *self.peek() == Tok::Eof => break,
                _ => {}
            }
            let (kw, kpos) = self.ident()?;
            match kw.as_str() {
                "node" => {
                    while !self.is_punct(";") {
                        self.node_ref(&mut b)?;
                        self.eat(",");
                    }
                }
                "points" => {
                    if !points_allowed {
                        return Err(DslError::syntax(
                            kpos.0,
                            kpos.1,
                            "rule graphs take their points from the pattern",
                        ));
                    }
                    if b.has_points {
                        return Err(DslError::syntax(kpos.0, kpos.1, "points declared twice"));
                    }
                    let mut pts = Vec::new();
                    while !self.is_punct(";") {
                        pts.push(self.node_ref(&mut b)?);
                        self.eat(",");
                    }
                    b.graph.set_points(pts);
                    b.has_points = true;
                }
                "edge" | "frame" | "var" | "fvar" | "call" | "dcall" | "type" => {
                    if let Some(p) = self.edge_statement(&kw, &mut b)? {
                        params.push(p);
                    }
                }
                _ => return Err(DslError::syntax(kpos.0, kpos.1, format!("unknown statement `{kw}`"))),
            }
            self.expect(";")?;
        }
        for (e, names) in params {
            let mut ids = Vec::new();
            for (n, (l, c)) in names {
                match b.edges.get(&n) {
                    Some(id) => ids.push(*id),
                    None => return Err(DslError::UnresolvedName { name: n, line: l, col: c }),
                }
            }
            b.graph.edge_mut(e).expect("edge").params = ids;
        }
        Ok(b)
    }

    fn node_ref(&mut self, b: &mut Body) -> Result<NodeId, DslError> {
        let spread = self.eat("..");
        let (name, (l, c)) = self.ident()?;
        match b.nodes.get(&name) {
            Some(n) => {
                if b.graph.is_spread(*n) != spread {
                    return Err(DslError::syntax(l, c, format!("`{name}` used both as node and as spread")));
                }
                Ok(*n)
            }
            None => {
                let n = if spread { b.graph.add_spread_node() } else { b.graph.add_node() };
                b.nodes.insert(name, n);
                Ok(n)
            }
        }
    }

    fn refs(&mut self, b: &mut Body) -> Result<Vec<NodeId>, DslError> {
        self.expect("(")?;
        let mut out = Vec::new();
        if !self.eat(")") {
            loop {
                out.push(self.node_ref(b)?);
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(out)
    }

    fn name_edge(&self, b: &mut Body, name: Option<(String, Pos)>, id: EdgeId) -> Result<(), DslError> {
        if let Some((n, (l, c))) = name {
            if b.edges.insert(n.clone(), id).is_some() {
                return Err(DslError::DuplicateDeclaration { name: n, line: l, col: c });
            }
        }
        Ok(())
    }

    fn edge_statement(&mut self, kw: &str, b: &mut Body) -> Result<Option<PendingParams>, DslError> {
        let mut name = None;
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Punct(":") {
            name = Some(self.ident()?);
            self.expect(":")?;
        }
        let lpos = self.here();
        let label: String = match (kw, self.peek().clone()) {
            ("edge", Tok::Punct("(")) => String::new(),
            ("edge", Tok::Str(s)) => {
                self.bump();
                s
            }
            ("type", _) => self.type_term()?.to_string(),
            _ => self.ident()?.0,
        };
        let att = self.refs(b)?;
        let capital = label.chars().next().is_some_and(|c| c.is_ascii_uppercase());
        let kind = match kw {
            "edge" => EdgeKind::Plain,
            "frame" => EdgeKind::Frame,
            "var" => EdgeKind::Variable(VarMode::Graph),
            "fvar" => EdgeKind::Variable(VarMode::Frame),
            "call" if capital => EdgeKind::Variable(VarMode::Call),
            "dcall" if capital => EdgeKind::Variable(VarMode::Disguised),
            "call" => EdgeKind::Call,
            "dcall" => EdgeKind::Disguised,
            _ => EdgeKind::Nonterminal,
        };
        if matches!(kind, EdgeKind::Call | EdgeKind::Disguised) {
            b.calls.push((label.clone(), lpos));
        }
        let mut params = Vec::new();
        if kind.takes_params() && self.eat("[") && !self.eat("]") {
            loop {
                params.push(self.ident()?);
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        if kind.takes_params() && self.eat_keyword("as") {
            if name.is_some() {
                return self.err("edge named twice");
            }
            name = Some(self.ident()?);
        }
        let mut edge = Edge::new(label.as_str(), kind, att);
        if kind == EdgeKind::Frame {
            let contents = if self.eat("=") {
                let inner = self.body(true)?;
                b.var_types.extend(inner.var_types);
                b.calls.extend(inner.calls);
                inner.graph
            } else {
                Graph::new()
            };
            edge.contents = Some(Box::new(contents));
        }
        if let EdgeKind::Variable(mode) = kind {
            let tpos = self.here();
            let ty = if self.eat(":") {
                Some(match mode {
                    VarMode::Frame => VarType::Frame(Symbol::from(self.ident()?.0)),
                    _ => VarType::Shape(self.type_term()?.label()),
                })
            } else if matches!(mode, VarMode::Call | VarMode::Disguised) {
                Some(VarType::Shape(Symbol::new(PI)))
            } else {
                None
            };
            if let Some(t) = ty {
                b.var_types.push((Symbol::from(label.clone()), t, tpos));
            }
        }
        let id = b.graph.add_edge(edge);
        self.name_edge(b, name, id)?;
        Ok((!params.is_empty()).then_some((id, params)))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Str(s) => format!("{s:?}"),
        Tok::Num(n) => n.to_string(),
        Tok::Punct(p) => format!("`{p}`"),
        Tok::Eof => "end of input".into(),
    }
}

#[derive(Default)]
struct Builder {
    program: Program,
    declared: BTreeMap<(&'static str, String), Pos>,
    calls: Vec<(String, Pos)>,
    methods: Vec<(Symbol, String, Visibility, Pos)>,
    imported: bool,
}

impl Builder {
    fn declare(&mut self, kind: &'static str, name: &str, pos: Pos) -> Result<(), DslError> {
        if self.declared.insert((kind, name.to_string()), pos).is_some() {
            return Err(DslError::DuplicateDeclaration {
                name: name.to_string(),
                line: pos.0,
                col: pos.1,
            });
        }
        Ok(())
    }

    fn items(&mut self, src: &str) -> Result<(), DslError> {
        let mut p = Cursor::new(lex(src)?);
        while *p.peek() != Tok::Eof {
            let (kw, kpos) = p.ident()?;
            match kw.as_str() {
                "import" => {
                    let (m, (l, c)) = p.ident()?;
                    p.expect(";")?;
                    if m != "stdlib" {
                        return Err(DslError::UnresolvedName { name: m, line: l, col: c });
                    }
                    if !self.imported {
                        self.imported = true;
                        self.items(STDLIB)?;
                    }
                }
                "shape" => self.shape(&mut p)?,
                "signature" => {
                    let body = p.body(true)?;
                    p.eat(";");
                    self.calls.extend(body.calls);
                    if !self.program.grammar.is_type(PI) {
                        self.program.grammar.declare(ShapeType {
                            name: Symbol::new(PI),
                            arity: None,
                            type_params: Vec::new(),
                        });
                    }
                    self.program.grammar.add_alternative(PI, body.graph);
                }
                "frame" => {
                    let (label, pos) = p.ident()?;
                    let arity = p.arity()?.ok_or_else(|| DslError::syntax(pos.0, pos.1, "frames have a fixed arity"))?;
                    p.expect(":")?;
                    let ty = p.type_term()?;
                    p.expect(";")?;
                    self.declare("frame", &label, pos)?;
                    self.program.frames.insert(
                        Symbol::from(label.clone()),
                        FrameDecl {
                            label: label.into(),
                            arity,
                            content_type: ty,
                        },
                    );
                }
                "class" => self.class(&mut p)?,
                "pred" => self.pred(&mut p)?,
                "graph" => {
                    let (name, pos) = p.ident()?;
                    if p.is_punct("(") {
                        p.arity()?;
                    }
                    let body = p.body(true)?;
                    p.eat(";");
                    self.declare("graph", &name, pos)?;
                    self.calls.extend(body.calls);
                    self.program.graphs.insert(
                        name.into(),
                        NamedGraph {
                            graph: body.graph,
                            nodes: body.nodes,
                            edges: body.edges,
                        },
                    );
                }
                _ => return Err(DslError::syntax(kpos.0, kpos.1, format!("unknown declaration `{kw}`"))),
            }
        }
        Ok(())
    }

    fn shape(&mut self, p: &mut Cursor) -> Result<(), DslError> {
        let (name, pos) = p.ident()?;
        let mut params = Vec::new();
        if p.eat("<") {
            loop {
                params.push(Symbol::from(p.ident()?.0));
                if p.eat(">") {
                    break;
                }
                p.expect(",")?;
            }
        }
        let arity = p.arity()?;
        p.expect("::=")?;
        let mut alts = vec![p.body(true)?.graph];
        while p.eat("|") {
            alts.push(p.body(true)?.graph);
        }
        p.eat(";");
        self.declare("shape", &name, pos)?;
        self.program.grammar.declare(ShapeType {
            name: Symbol::from(name.clone()),
            arity,
            type_params: params,
        });
        for a in alts {
            self.program.grammar.add_alternative(name.as_str(), a);
        }
        Ok(())
    }

    fn class(&mut self, p: &mut Cursor) -> Result<(), DslError> {
        let (name, pos) = p.ident()?;
        let arity = p.arity()?.ok_or_else(|| DslError::syntax(pos.0, pos.1, "classes have a fixed arity"))?;
        p.expect(":")?;
        let ty = p.type_term()?;
        p.expect("{")?;
        let class = Symbol::from(name.clone());
        let mut methods = BTreeMap::new();
        while !p.eat("}") {
            let vis = if p.eat_keyword("public") {
                Visibility::Public
            } else if p.eat_keyword("private") {
                Visibility::Private
            } else {
                return p.err("expected `public` or `private`");
            };
            let (m, mpos) = p.ident()?;
            p.expect(";")?;
            if methods.insert(Symbol::from(m.clone()), vis).is_some() {
                return Err(DslError::DuplicateDeclaration {
                    name: m,
                    line: mpos.0,
                    col: mpos.1,
                });
            }
            self.methods.push((class.clone(), m, vis, mpos));
        }
        p.eat(";");
        self.declare("frame", &name, pos)?;
        self.program.classes.insert(
            class.clone(),
            ClassDecl {
                name: class,
                arity,
                content_type: ty,
                methods,
            },
        );
        Ok(())
    }

    fn pred(&mut self, p: &mut Cursor) -> Result<(), DslError> {
        let (name, pos) = p.ident()?;
        let arity = match p.arity()? {
            Some(k) => Arity::Fixed(k),
            None => Arity::Variadic,
        };
        p.expect("{")?;
        let mut pred = Predicate::new(name.as_str(), arity);
        loop {
            if p.eat_keyword("otherwise") {
                let (o, opos) = p.ident()?;
                pred.otherwise = match o.as_str() {
                    "fail" => Otherwise::Fail,
                    "succeed" => Otherwise::Succeed,
                    "raise" => Otherwise::Raise,
                    _ => return Err(DslError::syntax(opos.0, opos.1, "expected `fail`, `succeed` or `raise`")),
                };
                p.expect(";")?;
                p.expect("}")?;
                break;
            }
            if p.eat("}") {
                break;
            }
            if !p.eat_keyword("rule") {
                return p.err("expected `rule` or `otherwise`");
            }
            let rule_name = match p.peek() {
                Tok::Ident(_) => p.ident()?.0,
                _ => format!("r{}", pred.rules.len() + 1),
            };
            let rule = self.rule(p, rule_name)?;
            pred.rules.push(rule);
        }
        p.eat(";");
        self.declare("pred", &name, pos)?;
        self.program.predicates.insert(name.into(), pred);
        Ok(())
    }

    fn rule(&mut self, p: &mut Cursor, name: String) -> Result<Rule, DslError> {
        p.expect("{")?;
        if !p.eat_keyword("pattern") {
            return p.err("expected `pattern`");
        }
        let pattern = p.body(false)?;
        let premise = if p.eat_keyword("if") { Some(p.body(false)?) } else { None };
        p.expect("=>")?;
        let replacement = if p.eat_keyword("fail") {
            None
        } else if p.eat_keyword("succeed") {
            Some(Body::default())
        } else {
            Some(p.body(false)?)
        };
        p.eat(";");
        p.expect("}")?;
        p.eat(";");

        let mut var_types: BTreeMap<Symbol, VarType> = BTreeMap::new();
        let sides = std::iter::once(&pattern).chain(premise.as_ref()).chain(replacement.as_ref());
        for side in sides {
            self.calls.extend(side.calls.iter().cloned());
            for (v, t, (l, c)) in &side.var_types {
                if let Some(old) = var_types.insert(v.clone(), t.clone()) {
                    if old != *t {
                        return Err(DslError::syntax(*l, *c, format!("conflicting types for variable {v}")));
                    }
                }
            }
        }

        let mut pat = pattern.graph.clone();
        let order: Vec<(String, NodeId)> = {
            let mut v: Vec<(String, NodeId)> = pattern.nodes.iter().map(|(k, n)| (k.clone(), *n)).collect();
            v.sort_by_key(|(_, n)| *n);
            v
        };
        pat.set_points(pat.nodes().collect());
        let interface = |side: Body| -> Graph {
            let mut g = side.graph;
            let pts = order
                .iter()
                .map(|(name, pn)| match side.nodes.get(name) {
                    Some(n) => *n,
                    None if pattern.graph.is_spread(*pn) => g.add_spread_node(),
                    None => g.add_node(),
                })
                .collect();
            g.set_points(pts);
            g
        };
        Ok(Rule {
            name: Symbol::from(name),
            premise: premise.map(interface),
            replacement: match replacement {
                Some(r) => Replacement::Graph(interface(r)),
                None => Replacement::Fail,
            },
            pattern: pat,
            var_types,
        })
    }

    fn finish(mut self) -> Result<Program, DslError> {
        for (class, m, vis, (l, c)) in std::mem::take(&mut self.methods) {
            match self.program.predicates.get_mut(m.as_str()) {
                Some(pred) => {
                    pred.owner = Some(class);
                    pred.visibility = vis;
                }
                None => return Err(DslError::UnresolvedName { name: m, line: l, col: c }),
            }
        }
        for (label, (l, c)) in &self.calls {
            if !self.program.predicates.contains_key(label.as_str()) && !self.program.grammar.is_type(label) {
                return Err(DslError::UnresolvedName {
                    name: label.clone(),
                    line: *l,
                    col: *c,
                });
            }
        }
        Ok(self.program)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_an_empty_program() {
        assert_eq!(parse_program("").unwrap(), Program::new());
    }

    #[test]
    fn rule_interface_comes_from_the_pattern() {
        let p = parse_program(
            "pred p(1) { rule keep { pattern { call p(a); edge x(a, b); } => { edge y(b, c); } } otherwise fail; }",
        )
        .unwrap();
        let r = &p.predicates["p"].rules[0];
        assert_eq!(r.pattern.points().len(), 2);
        let rg = r.replacement.graph().unwrap();
        assert_eq!(rg.points().len(), 2);
        assert_eq!(rg.node_count(), 3);
        assert_eq!(r.name, "keep");
    }

    #[test]
    fn parameters_may_refer_forward() {
        let g = parse_graph("call q()[x]; dcall q() as x;").unwrap();
        let q = g.edges.get("x").copied().unwrap();
        assert!(g.graph.edges().any(|(_, e)| e.params == vec![q]));
    }

    #[test]
    fn unresolved_and_duplicate_names() {
        assert!(matches!(
            parse_program("graph g { call nowhere(); }"),
            Err(DslError::UnresolvedName { .. })
        ));
        assert!(matches!(
            parse_program("graph g { } graph g { }"),
            Err(DslError::DuplicateDeclaration { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_program("graph g {\n  edge x(a b); }") {
            Err(DslError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 12)),
            other => panic!("{other:?}"),
        }
    }
}
