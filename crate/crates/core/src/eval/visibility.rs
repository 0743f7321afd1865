use crate::graph::{EdgeKind, Graph};
use crate::matching::check_rule;
use crate::program::{Program, Visibility};
use crate::report::{ValidationReport, ViolationKind};
use crate::symbol::Symbol;

/// Rule invariants for every predicate, plus: each pattern has exactly one edge calling the
/// predicate it belongs to.
pub fn check_predicates(program: &Program) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (name, pred) in &program.predicates {
        for rule in &pred.rules {
            let base = format!("pred {name}/{}", rule.name);
            for v in check_rule(rule).violations {
                let path = format!("pred {name}/{}", v.path);
                match v.severity {
                    crate::report::Severity::Error => report.error(v.kind, path, v.message),
                    crate::report::Severity::Info => report.info(v.kind, path, v.message),
                }
            }
            let n = rule
                .pattern
                .edges()
                .filter(|(_, e)| e.kind == EdgeKind::Call && e.label == *name)
                .count();
            if n != 1 {
                report.error(
                    ViolationKind::PredicateEdgeCount,
                    format!("{base}/pattern"),
                    format!("found {n} edges calling {name}"),
                );
            }
        }
    }
    report
}

/// Class encapsulation: only a class's own predicates open its frames, and private methods are
/// called only from within the class.
pub fn check_visibility(program: &Program) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (name, pred) in &program.predicates {
        for rule in &pred.rules {
            let base = format!("pred {name}/{}", rule.name);
            for (side, g) in rule.graphs() {
                if side != "replacement" {
                    for class in opened_frames(program, g) {
                        if pred.owner.as_ref() != Some(&class) {
                            report.error(
                                ViolationKind::FrameAccessOutsideClass,
                                format!("{base}/{side}"),
                                format!("{class} frame opened outside class {class}"),
                            );
                        }
                    }
                }
                for (m, class) in private_calls(program, g) {
                    if pred.owner.as_ref() != Some(&class) {
                        report.error(
                            ViolationKind::PrivateMethodCall,
                            format!("{base}/{side}"),
                            format!("{m} is private to {class}"),
                        );
                    }
                }
            }
        }
    }
    for (name, ng) in &program.graphs {
        for (m, class) in private_calls(program, &ng.graph) {
            report.error(
                ViolationKind::PrivateMethodCall,
                format!("graph {name}"),
                format!("{m} is private to {class}"),
            );
        }
    }
    report
}

/// Class labels of literal frames anywhere in `g`.
fn opened_frames(program: &Program, g: &Graph) -> Vec<Symbol> {
    g.all_edges()
        .into_iter()
        .filter(|(_, _, e)| e.kind == EdgeKind::Frame && program.classes.contains_key(&e.label))
        .map(|(_, _, e)| e.label.clone())
        .collect()
}

fn private_calls(program: &Program, g: &Graph) -> Vec<(Symbol, Symbol)> {
    g.all_edges()
        .into_iter()
        .filter(|(_, _, e)| matches!(e.kind, EdgeKind::Call | EdgeKind::Disguised))
        .filter_map(|(_, _, e)| {
            let p = program.predicate(e.label.as_str())?;
            match (&p.owner, p.visibility) {
                (Some(class), Visibility::Private) => Some((e.label.clone(), class.clone())),
                _ => None,
            }
        })
        .collect()
}
