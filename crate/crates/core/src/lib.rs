//! A graph-transformation engine and interpreter for rule-based diagram programs.
//!
//! Programs transform hierarchical pointed hypergraphs with rules that contain variables,
//! evaluated by a backtracking predicate engine and checked statically against
//! hyperedge-replacement shape grammars.

pub mod graph;
pub mod iso;
pub mod cli;
pub mod dsl;
pub mod eval;
pub mod matching;
pub mod program;
pub mod shapes;
pub mod report;
pub mod subst;
pub mod symbol;

pub use graph::{validate, Edge, EdgeId, EdgeKind, Graph, NodeId, VarMode};
pub use iso::{isomorphic, Isomorphism};
pub use report::{Severity, ValidationReport, Violation, ViolationKind};
pub use subst::{instantiate, plug, variables_of, Context, SubstError, Substitution};
pub use symbol::Symbol;
pub use matching::{apply, check_rule, enumerate_matches, premise_union, Match, Replacement, Rule, VarType};
pub use program::{Arity, ClassDecl, FrameDecl, NamedGraph, Otherwise, Predicate, Program, Visibility};
pub use eval::{evaluate, run, Action, Budget, Evaluation, Outcome, TraceRecord};
