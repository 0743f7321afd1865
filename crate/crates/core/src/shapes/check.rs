//! Static type checking of programs against their shape grammar.

use std::collections::{BTreeMap, BTreeSet};

use super::parse::{conforms, is_nonterminal, parse_within, ParseOptions};
use super::{ShapeGrammar, TypeTerm, PI};
use crate::graph::{Edge, EdgeId, EdgeKind, Graph, NodeId, VarMode};
use crate::matching::VarType;
use crate::program::Program;
use crate::report::{ValidationReport, ViolationKind};
use crate::symbol::Symbol;

/// Checks frame contents, typed rule variables and predicate calls of `program`.
pub fn check_program(program: &Program) -> ValidationReport {
    let mut report = ValidationReport::new();
    check_grammar(&program.grammar, &mut report);
    let grammar = instantiate_all(program, &mut report);
    let checker = Checker {
        program,
        grammar: &grammar,
    };

    for (name, ng) in &program.graphs {
        let at = format!("graph {name}");
        let opts = ParseOptions::default();
        checker.frames(&ng.graph, &at, &opts, ViolationKind::FrameContentsShape, &mut report);
        checker.calls(&ng.graph, &at, &opts, &mut report);
    }
    for pred in program.predicates.values() {
        for rule in &pred.rules {
            let at = format!("pred {}/rule {}", pred.name, rule.name);
            let mut opts = ParseOptions::default();
            for (v, t) in &rule.var_types {
                let label = match t {
                    VarType::Shape(s) | VarType::Frame(s) => s.clone(),
                };
                opts.var_types.insert(v.clone(), label);
            }
            let mut untyped = BTreeSet::new();
            for (side, g) in rule.graphs() {
                collect_untyped(g, 0, &opts.var_types, &mut untyped);
                let kind = match side {
                    "pattern" => ViolationKind::PatternShape,
                    "premise" => ViolationKind::PremiseShape,
                    _ => ViolationKind::ReplacementShape,
                };
                let side_at = format!("{at}/{side}");
                checker.frames(g, &side_at, &opts, kind, &mut report);
                checker.calls(g, &side_at, &opts, &mut report);
            }
            for v in untyped {
                report.error(ViolationKind::UntypedVariable, at.clone(), format!("variable {v} has no declared type"));
            }
        }
    }
    report
}

/// Variables inside frames must be typed; predicate variables anywhere must be.
fn collect_untyped(g: &Graph, depth: usize, types: &BTreeMap<Symbol, Symbol>, out: &mut BTreeSet<Symbol>) {
    for (_, e) in g.edges() {
        if let EdgeKind::Variable(mode) = e.kind {
            let needs = depth > 0 || matches!(mode, VarMode::Call | VarMode::Disguised);
            if needs && !types.contains_key(&e.label) {
                out.insert(e.label.clone());
            }
        }
        if let Some(c) = e.contents() {
            collect_untyped(c, depth + 1, types, out);
        }
    }
}

fn check_grammar(g: &ShapeGrammar, report: &mut ValidationReport) {
    for (name, alts) in &g.productions {
        let Some(decl) = g.types.get(name) else {
            report.error(ViolationKind::Grammar, format!("shape {name}"), "productions for an undeclared type");
            continue;
        };
        for (i, alt) in alts.iter().enumerate() {
            let at = format!("shape {name}/alternative {i}");
            if let Some(k) = decl.arity {
                if alt.has_spread() || alt.points().len() != k {
                    report.error(
                        ViolationKind::Grammar,
                        at.clone(),
                        format!("{} points, the type has arity {k}", alt.points().len()),
                    );
                }
            }
            check_nonterminals(g, alt, &decl.type_params, &at, report);
        }
    }
}

fn check_nonterminals(g: &ShapeGrammar, alt: &Graph, params: &[Symbol], at: &str, report: &mut ValidationReport) {
    for (_, e) in alt.edges() {
        if e.kind == EdgeKind::Nonterminal {
            match TypeTerm::parse(e.label.as_str()) {
                None => report.error(ViolationKind::Grammar, at, format!("malformed type {}", e.label)),
                Some(t) if params.contains(&t.name) && t.args.is_empty() => {}
                Some(t) => match g.types.get(&t.name) {
                    None => report.error(ViolationKind::Grammar, at, format!("unknown type {}", t.name)),
                    Some(d) => {
                        if let Some(k) = d.arity {
                            if !e.att.iter().any(|a| alt.is_spread(*a)) && e.att.len() != k {
                                report.error(
                                    ViolationKind::Grammar,
                                    at,
                                    format!("{} used with {} attachments, arity is {k}", t.name, e.att.len()),
                                );
                            }
                        }
                    }
                },
            }
        }
        if let Some(c) = e.contents() {
            check_nonterminals(g, c, params, at, report);
        }
    }
}

/// The grammar extended with every type instance the program mentions.
fn instantiate_all(p: &Program, report: &mut ValidationReport) -> ShapeGrammar {
    let mut terms: BTreeSet<TypeTerm> = BTreeSet::new();
    terms.extend(p.frames.values().map(|f| f.content_type.clone()));
    terms.extend(p.classes.values().map(|c| c.content_type.clone()));
    for pred in p.predicates.values() {
        for rule in &pred.rules {
            for t in rule.var_types.values() {
                if let VarType::Shape(s) = t {
                    if let Some(term) = TypeTerm::parse(s.as_str()) {
                        terms.insert(term);
                    }
                }
            }
        }
    }
    let mut g = p.grammar.clone();
    for t in terms {
        if t.args.is_empty() && t.name == PI {
            continue;
        }
        match g.monomorphize(&t) {
            Ok(next) => g = next,
            Err(e) => report.error(ViolationKind::Grammar, format!("type {t}"), e.to_string()),
        }
    }
    g
}

struct Checker<'a> {
    program: &'a Program,
    grammar: &'a ShapeGrammar,
}

impl Checker<'_> {
    fn frames(&self, g: &Graph, at: &str, opts: &ParseOptions, kind: ViolationKind, report: &mut ValidationReport) {
        for (id, e) in g.edges() {
            if e.kind != EdgeKind::Frame {
                continue;
            }
            let here = format!("{at}/{id}");
            let Some(ty) = self.program.frame_type(e.label.as_str()) else {
                report.error(
                    ViolationKind::UndeclaredFrameType,
                    here,
                    format!("frame label {} has no declared content type", e.label),
                );
                continue;
            };
            if let Some(k) = self.program.frame_arity(e.label.as_str()) {
                if k != e.att.len() {
                    report.error(kind, here, format!("{} frame with {} links, declared {k}", e.label, e.att.len()));
                    continue;
                }
            }
            let contents = e.contents().cloned().unwrap_or_default();
            if !conforms(self.grammar, ty.label().as_str(), &contents, opts) {
                report.error(kind, here, format!("contents of {} frame are not of type {ty}", e.label));
                continue;
            }
            self.frames(&contents, &here, opts, kind, report);
        }
    }

    /// Checks every top-level call against its declared arity and the signatures.
    fn calls(&self, g: &Graph, at: &str, opts: &ParseOptions, report: &mut ValidationReport) {
        let targets: BTreeSet<EdgeId> = g.edges().flat_map(|(_, e)| e.params.iter().copied()).collect();
        for (id, e) in g.edges() {
            if !matches!(e.kind, EdgeKind::Call | EdgeKind::Disguised) || targets.contains(&id) {
                continue;
            }
            let here = format!("{at}/{id}");
            if let Some(pred) = self.program.predicate(e.label.as_str()) {
                if !pred.arity.admits(e.att.len()) {
                    report.error(
                        ViolationKind::Signature,
                        here,
                        format!("{} called with {} nodes, declared arity {}", e.label, e.att.len(), pred.arity),
                    );
                    continue;
                }
            }
            if !self.grammar.is_type(PI) {
                continue;
            }
            if !self.matches_signature(g, id, e, opts) {
                report.error(
                    ViolationKind::Signature,
                    here,
                    format!("call of {} matches no signature", e.label),
                );
            }
        }
    }

    fn matches_signature(&self, g: &Graph, id: EdgeId, e: &Edge, opts: &ParseOptions) -> bool {
        let closure: BTreeSet<EdgeId> = g.call_closure(id).into_iter().collect();
        let mut anchor: Vec<NodeId> = Vec::new();
        for n in g.call_points(id) {
            if !anchor.contains(&n) {
                anchor.push(n);
            }
        }
        let mut form = Graph::new();
        let nodes = form.add_nodes(anchor.len());
        let full: Vec<NodeId> = g
            .call_points(id)
            .iter()
            .map(|n| nodes[anchor.iter().position(|a| a == n).expect("anchor")])
            .collect();
        form.add_edge(Edge::new(PI, e.kind, full));
        form.set_points(nodes);
        debug_assert!(is_nonterminal(self.grammar, form.edges().next().expect("edge").1));
        parse_within(self.grammar, &form, g, &closure, &anchor, opts).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{Arity, Predicate};
    use crate::shapes::ShapeType;

    fn remove_signature() -> ShapeGrammar {
        let mut g = ShapeGrammar::new();
        g.declare(ShapeType {
            name: PI.into(),
            arity: None,
            type_params: vec![],
        });
        let mut sig = Graph::new();
        let [a, b] = [sig.add_node(), sig.add_node()];
        sig.add_edge(Edge::call("remove", vec![a, b]));
        sig.set_points(vec![a, b]);
        g.add_alternative(PI, sig);
        g
    }

    fn program_with_main(k: usize) -> Program {
        let mut p = Program::new();
        p.grammar = remove_signature();
        p.predicates.insert("remove".into(), Predicate::new("remove", Arity::Fixed(2)));
        let mut main = Graph::new();
        let ns = main.add_nodes(k);
        main.add_edge(Edge::call("remove", ns));
        p.graphs.insert(
            "main".into(),
            crate::program::NamedGraph {
                graph: main,
                ..Default::default()
            },
        );
        p
    }

    #[test]
    fn well_formed_call_passes() {
        assert!(check_program(&program_with_main(2)).is_empty());
    }

    #[test]
    fn wrong_arity_is_one_signature_violation() {
        let r = check_program(&program_with_main(3));
        assert_eq!(r.errors().count(), 1);
        assert_eq!(r.count(ViolationKind::Signature), 1);
    }

    #[test]
    fn undeclared_frame_label_is_reported() {
        let mut p = program_with_main(2);
        let mut g = Graph::new();
        g.add_edge(Edge::frame("Box", vec![], Graph::new()));
        p.graphs.get_mut("main").unwrap().graph = g;
        assert_eq!(check_program(&p).count(ViolationKind::UndeclaredFrameType), 1);
    }
}
