//! Programs: predicates with their rules, classes, frame declarations, shapes and named graphs.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::{EdgeId, EdgeKind, Graph, NodeId};
use crate::matching::Rule;
use crate::shapes::{ShapeGrammar, TypeTerm};
use crate::symbol::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Fixed(usize),
    Variadic,
}

impl Arity {
    pub fn admits(self, k: usize) -> bool {
        match self {
            Arity::Fixed(n) => n == k,
            Arity::Variadic => true,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Fixed(n) => write!(f, "{n}"),
            Arity::Variadic => f.write_str(".."),
        }
    }
}

/// What happens to a call when none of the predicate's rules applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Otherwise {
    Fail,
    Succeed,
    Raise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visibility {
    Public,
    Private,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub name: Symbol,
    pub arity: Arity,
    pub rules: Vec<Rule>,
    pub otherwise: Otherwise,
    /// The class this predicate is a method of.
    pub owner: Option<Symbol>,
    pub visibility: Visibility,
}

impl Predicate {
    pub fn new(name: impl Into<Symbol>, arity: Arity) -> Self {
        Predicate {
            name: name.into(),
            arity,
            rules: Vec::new(),
            otherwise: Otherwise::Fail,
            owner: None,
            visibility: Visibility::Public,
        }
    }

    /// The call edge of a rule pattern that this predicate is defined on.
    pub fn call_edge(&self, pattern: &Graph) -> Option<EdgeId> {
        pattern
            .edges()
            .find(|(_, e)| e.kind == EdgeKind::Call && e.label == self.name)
            .map(|(id, _)| id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecl {
    /// Also the label of the class's frames.
    pub name: Symbol,
    pub arity: usize,
    pub content_type: TypeTerm,
    pub methods: BTreeMap<Symbol, Visibility>,
}

/// A frame label with the type of graphs its frames contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameDecl {
    pub label: Symbol,
    pub arity: usize,
    pub content_type: TypeTerm,
}

/// A graph declared in a program, with the names its nodes and edges were given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NamedGraph {
    pub graph: Graph,
    pub nodes: BTreeMap<String, NodeId>,
    pub edges: BTreeMap<String, EdgeId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub grammar: ShapeGrammar,
    pub classes: BTreeMap<Symbol, ClassDecl>,
    pub frames: BTreeMap<Symbol, FrameDecl>,
    pub predicates: BTreeMap<Symbol, Predicate>,
    pub graphs: BTreeMap<Symbol, NamedGraph>,
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.get(name)
    }

    pub fn graph(&self, name: &str) -> Option<&NamedGraph> {
        self.graphs.get(name)
    }

    /// Content type of frames labeled `label`, from a frame or class declaration.
    pub fn frame_type(&self, label: &str) -> Option<&TypeTerm> {
        self.frames
            .get(label)
            .map(|f| &f.content_type)
            .or_else(|| self.classes.get(label).map(|c| &c.content_type))
    }

    pub fn frame_arity(&self, label: &str) -> Option<usize> {
        self.frames
            .get(label)
            .map(|f| f.arity)
            .or_else(|| self.classes.get(label).map(|c| c.arity))
    }

    /// Adds everything declared in `other`; entries of `self` win on name clashes.
    pub fn merge(&mut self, other: Program) {
        for (k, v) in other.grammar.types {
            self.grammar.types.entry(k).or_insert(v);
        }
        for (k, v) in other.grammar.productions {
            let alts = self.grammar.productions.entry(k).or_default();
            alts.extend(v);
        }
        for (k, v) in other.classes {
            self.classes.entry(k).or_insert(v);
        }
        for (k, v) in other.frames {
            self.frames.entry(k).or_insert(v);
        }
        for (k, v) in other.predicates {
            self.predicates.entry(k).or_insert(v);
        }
        for (k, v) in other.graphs {
            self.graphs.entry(k).or_insert(v);
        }
    }
}
