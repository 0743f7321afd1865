//! Predicate evaluation with backtracking.
//!
//! Goals are predicate edges of the host. A goal is evaluated by trying the rules of its
//! predicate in order, each at every match in enumeration order; every attempt is a choice point
//! that saves the host. Calls introduced by a replacement are evaluated next (leftmost-innermost).
//! A conditional rule glues its premise and replacement in one step, evaluates the premise's calls
//! and only then commits to the replacement's calls. Failure restores the most recent choice point.

mod trace;
mod visibility;

use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use thiserror::Error;

use crate::graph::{Edge, EdgeId, EdgeKind, Graph};
use crate::matching::{enumerate_pinned, rewrite_at, Match, Replacement, Rule};
use crate::program::{Otherwise, Program};
use crate::subst::{instantiate_in_place, Substitution};
use crate::symbol::Symbol;

pub use trace::{Action, TraceRecord};
pub use visibility::{check_predicates, check_visibility};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Engine steps: goals selected, rule attempts and premise completions.
    pub max_steps: usize,
    /// Open choice points.
    pub max_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 100_000,
            max_depth: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success(Graph),
    Failure,
    Exception { predicate: Symbol, step: usize },
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub outcome: Outcome,
    pub trace: Vec<TraceRecord>,
    pub steps: usize,
}

impl Evaluation {
    /// The trace in its line format.
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|r| format!("{r}\n")).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("expected a {expected} edge")]
    WrongKind { expected: &'static str },
}

/// Turns a disguised predicate edge into a callable one.
pub fn undisguise(e: &Edge) -> Result<Edge, EvalError> {
    if e.kind != EdgeKind::Disguised {
        return Err(EvalError::WrongKind { expected: "disguised" });
    }
    Ok(Edge {
        kind: EdgeKind::Call,
        ..e.clone()
    })
}

pub fn disguise(e: &Edge) -> Result<Edge, EvalError> {
    if e.kind != EdgeKind::Call {
        return Err(EvalError::WrongKind { expected: "predicate" });
    }
    Ok(Edge {
        kind: EdgeKind::Disguised,
        ..e.clone()
    })
}

pub fn evaluate(program: &Program, host: &Graph, budget: Budget) -> Outcome {
    run(program, host, budget).outcome
}

/// Evaluates all predicate edges at the top level of `host`, in identifier order.
pub fn run(program: &Program, host: &Graph, budget: Budget) -> Evaluation {
    let mut engine = Engine {
        program,
        budget,
        host: host.clone(),
        agenda: Vec::new(),
        trail: Vec::new(),
        steps: 0,
        trace: Vec::new(),
        expanded: HashMap::new(),
    };
    let calls: Vec<EdgeId> = host
        .edges()
        .filter(|(_, e)| e.kind == EdgeKind::Call)
        .map(|(id, _)| id)
        .collect();
    engine.push_goals(&calls);
    let outcome = engine.run();
    Evaluation {
        outcome,
        steps: engine.steps,
        trace: engine.trace,
    }
}

#[derive(Clone, Debug)]
enum Task {
    Goal(EdgeId),
    /// All calls of a premise have succeeded: commit the rule of choice point `cp`.
    PremiseDone { cp: usize, then: Vec<EdgeId>, fail: bool },
}

struct ChoicePoint {
    host: Graph,
    agenda: Vec<Task>,
    goal: EdgeId,
    predicate: Symbol,
    alternatives: VecDeque<(Rc<Rule>, Match)>,
    /// Some rule has been applied (for conditional rules: its premise succeeded).
    applied: bool,
}

struct Engine<'p> {
    program: &'p Program,
    budget: Budget,
    host: Graph,
    /// Pending tasks; the last one is next.
    agenda: Vec<Task>,
    trail: Vec<ChoicePoint>,
    steps: usize,
    trace: Vec<TraceRecord>,
    expanded: HashMap<(Symbol, usize, Vec<usize>), Rc<Rule>>,
}

enum Next {
    Continue,
    Backtrack,
}

impl Engine<'_> {
    fn record(&mut self, predicate: &Symbol, rule: Option<&Symbol>, summary: String, action: Action) {
        self.trace.push(TraceRecord {
            step: self.steps,
            predicate: predicate.clone(),
            rule: rule.cloned(),
            summary,
            action,
        });
    }

    fn push_goals(&mut self, calls: &[EdgeId]) {
        self.agenda.extend(calls.iter().rev().map(|e| Task::Goal(*e)));
    }

    fn tick(&mut self) -> Result<(), Outcome> {
        if self.steps >= self.budget.max_steps {
            return Err(Outcome::BudgetExhausted);
        }
        self.steps += 1;
        Ok(())
    }

    fn run(&mut self) -> Outcome {
        match self.run_inner() {
            Ok(()) => {
                let mut g = std::mem::take(&mut self.host);
                strip_disguised(&mut g);
                Outcome::Success(g)
            }
            Err(o) => o,
        }
    }

    fn run_inner(&mut self) -> Result<(), Outcome> {
        while let Some(task) = self.agenda.pop() {
            self.tick()?;
            match task {
                Task::Goal(e) => {
                    let Some(edge) = self.host.edge(e) else { continue };
                    if edge.kind != EdgeKind::Call {
                        continue;
                    }
                    let label = edge.label.clone();
                    let Some(pred) = self.program.predicate(label.as_str()) else {
                        self.record(&label, None, e.to_string(), Action::Exception);
                        return Err(Outcome::Exception {
                            predicate: label,
                            step: self.steps,
                        });
                    };
                    if self.trail.len() >= self.budget.max_depth {
                        return Err(Outcome::BudgetExhausted);
                    }
                    let alternatives = self.alternatives(&pred.name, e);
                    self.trail.push(ChoicePoint {
                        host: self.host.clone(),
                        agenda: self.agenda.clone(),
                        goal: e,
                        predicate: pred.name.clone(),
                        alternatives,
                        applied: false,
                    });
                    self.resume()?;
                }
                Task::PremiseDone { cp, then, fail } => {
                    if fail {
                        let pred = self.trail[cp].predicate.clone();
                        self.record(&pred, None, self.trail[cp].goal.to_string(), Action::Backtrack);
                        self.trail.truncate(cp);
                        self.resume()?;
                    } else {
                        self.trail[cp].applied = true;
                        self.push_goals(&then);
                    }
                }
            }
        }
        Ok(())
    }

    /// All (rule, match) pairs for a goal, rules in textual order.
    fn alternatives(&mut self, pred: &Symbol, goal: EdgeId) -> VecDeque<(Rc<Rule>, Match)> {
        let program = self.program;
        let predicate = program.predicate(pred.as_str()).expect("predicate");
        let width = self.host.call_points(goal).len();
        let mut out = VecDeque::new();
        for (ri, rule) in predicate.rules.iter().enumerate() {
            let spreads = rule.spread_positions().len();
            for ks in splits(spreads, width) {
                let key = (pred.clone(), ri, ks.clone());
                let r = self
                    .expanded
                    .entry(key)
                    .or_insert_with(|| Rc::new(if ks.is_empty() { rule.clone() } else { rule.expand(&ks) }))
                    .clone();
                let Some(pe) = predicate.call_edge(&r.pattern) else { continue };
                for m in enumerate_pinned(&self.host, &r.pattern, pe, goal) {
                    out.push_back((r.clone(), m));
                }
            }
        }
        out
    }

    /// Tries the remaining alternatives of the newest choice point, backtracking as needed.
    fn resume(&mut self) -> Result<(), Outcome> {
        loop {
            let Some(cp) = self.trail.last_mut() else {
                return Err(Outcome::Failure);
            };
            self.host = cp.host.clone();
            self.agenda = cp.agenda.clone();
            match cp.alternatives.pop_front() {
                Some((rule, m)) => {
                    self.tick()?;
                    match self.attempt(&rule, &m)? {
                        Next::Continue => return Ok(()),
                        Next::Backtrack => continue,
                    }
                }
                None => {
                    let cp = self.trail.pop().expect("choice point");
                    let goal = cp.goal.to_string();
                    if cp.applied {
                        self.record(&cp.predicate, None, goal, Action::Backtrack);
                        continue;
                    }
                    let pred = self.program.predicate(cp.predicate.as_str()).expect("predicate");
                    match pred.otherwise {
                        Otherwise::Fail => {
                            self.record(&cp.predicate, None, goal, Action::OtherwiseFail);
                        }
                        Otherwise::Succeed => {
                            self.record(&cp.predicate, None, goal, Action::OtherwiseSucceed);
                            for e in self.host.call_closure(cp.goal) {
                                let meta = self
                                    .host
                                    .edge(e)
                                    .is_some_and(|x| x.kind == EdgeKind::Disguised || e == cp.goal);
                                if meta {
                                    self.host.remove_edge(e);
                                }
                            }
                            return Ok(());
                        }
                        Otherwise::Raise => {
                            self.record(&cp.predicate, None, goal, Action::Exception);
                            return Err(Outcome::Exception {
                                predicate: cp.predicate,
                                step: self.steps,
                            });
                        }
                    }
                }
            }
        }
    }

    fn attempt(&mut self, rule: &Rule, m: &Match) -> Result<Next, Outcome> {
        let cp = self.trail.len() - 1;
        let pred = self.trail[cp].predicate.clone();
        self.record(&pred, Some(&rule.name), m.summary(), Action::Apply);
        let exception = |steps| Outcome::Exception {
            predicate: pred.clone(),
            step: steps,
        };
        let mut parts: Vec<(Graph, Vec<EdgeId>)> = Vec::new();
        if let Some(a) = &rule.premise {
            parts.push(instantiate_ordered(a, &m.substitution).map_err(|_| exception(self.steps))?);
        }
        if let Replacement::Graph(r) = &rule.replacement {
            parts.push(instantiate_ordered(r, &m.substitution).map_err(|_| exception(self.steps))?);
        }
        let graphs: Vec<&Graph> = parts.iter().map(|(g, _)| g).collect();
        let glued = rewrite_at(&mut self.host, m, &graphs).map_err(|_| exception(self.steps))?;
        let calls: Vec<Vec<EdgeId>> = parts
            .iter()
            .zip(&glued)
            .map(|((_, calls), gl)| calls.iter().map(|c| gl.edges[c]).collect())
            .collect();
        let fail = rule.replacement == Replacement::Fail;
        match (&rule.premise, fail) {
            (None, true) => {
                self.trail.truncate(cp);
                Ok(Next::Backtrack)
            }
            (None, false) => {
                self.trail[cp].applied = true;
                self.push_goals(&calls[0]);
                Ok(Next::Continue)
            }
            (Some(_), _) => {
                let then = if fail { Vec::new() } else { calls[1].clone() };
                self.agenda.push(Task::PremiseDone { cp, then, fail });
                self.push_goals(&calls[0]);
                Ok(Next::Continue)
            }
        }
    }
}

/// Instantiates `g` and lists the resulting predicate calls in the order their originating
/// edges appear in `g`.
fn instantiate_ordered(g: &Graph, s: &Substitution) -> Result<(Graph, Vec<EdgeId>), crate::subst::SubstError> {
    let mut out = g.clone();
    let records = instantiate_in_place(&mut out, s)?;
    let mut calls = Vec::new();
    for (id, e) in g.edges() {
        match records.iter().find(|(v, _)| *v == id) {
            Some((_, glued)) => {
                calls.extend(
                    glued
                        .edges
                        .values()
                        .filter(|x| out.edge(**x).is_some_and(|x| x.kind == EdgeKind::Call)),
                );
            }
            None if e.kind == EdgeKind::Call => calls.push(id),
            None => {}
        }
    }
    Ok((out, calls))
}

/// Every way to give `n` spreads sizes with sum at most `width`.
fn splits(n: usize, width: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: usize = v.iter().sum();
            for k in 0..=width - used {
                let mut w = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn strip_disguised(g: &mut Graph) {
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    for id in ids {
        if g.edge(id).is_some_and(|e| e.kind == EdgeKind::Disguised) {
            g.remove_edge(id);
        } else if let Some(c) = g.edge_mut(id).and_then(|e| e.contents.as_deref_mut()) {
            strip_disguised(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_program;

    fn run_named(src: &str, graph: &str) -> Evaluation {
        let p = parse_program(src).unwrap();
        run(&p, &p.graphs[graph].graph, Budget::default())
    }

    #[test]
    fn no_goals_is_immediate_success() {
        let mut g = Graph::new();
        g.add_node();
        assert_eq!(evaluate(&Program::new(), &g, Budget::default()), Outcome::Success(g));
    }

    #[test]
    fn undisguise_round_trips_and_rejects_plain_edges() {
        let d = Edge::disguised("remove", vec![]);
        assert_eq!(undisguise(&d).unwrap().kind, EdgeKind::Call);
        assert_eq!(disguise(&undisguise(&d).unwrap()).unwrap(), d);
        assert!(undisguise(&Edge::plain("x", vec![])).is_err());
    }

    const MARKS: &str = "
        pred mark(0) { rule { pattern { call mark(); edge todo(n); } => { edge done(n); } } otherwise fail; }
        graph one { edge todo(a); call mark(); }
        graph none { node a; call mark(); }
        graph twice { edge todo(a); call mark(); call mark(); }
    ";

    #[test]
    fn rule_then_otherwise() {
        let src = MARKS;
        let e = run_named(src, "one");
        let Outcome::Success(g) = e.outcome else { panic!() };
        assert!(g.edges().all(|(_, e)| e.label == "done"));
        assert_eq!(run_named(src, "none").outcome, Outcome::Failure);
        // the second mark finds nothing and fails; the first one has no alternative left
        assert_eq!(run_named(src, "twice").outcome, Outcome::Failure);
    }

    #[test]
    fn exceptions_and_budget() {
        let src = "pred boom(0) { otherwise raise; } graph g { call boom(); }";
        assert!(matches!(run_named(src, "g").outcome, Outcome::Exception { .. }));
        let src = "pred spin(0) { rule { pattern { call spin(); } => { call spin(); } } otherwise fail; } graph g { call spin(); }";
        assert_eq!(run_named(src, "g").outcome, Outcome::BudgetExhausted);
    }

    #[test]
    fn not_combinator() {
        let src = "import stdlib;
            signature { call mark(); };
            pred mark(0) { rule { pattern { call mark(); edge todo(n); } => { edge done(n); } } otherwise fail; }
            graph yes { edge todo(a); call not()[m]; dcall mark() as m; }
            graph no { node a; call not()[m]; dcall mark() as m; }";
        assert_eq!(run_named(src, "yes").outcome, Outcome::Failure);
        let Outcome::Success(g) = run_named(src, "no").outcome else { panic!() };
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));
    }
}
