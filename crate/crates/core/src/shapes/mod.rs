//! Shape grammars, graph parsing and static type checking.

mod check;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeKind, Graph};
use crate::symbol::Symbol;

pub use check::check_program;
pub use parse::{conforms, parse, parse_form, replay, Derivation, FormDerivation, ParseOptions};

/// Name of the designated signature type of predicate calls.
pub const PI: &str = "pi";

/// A possibly parameterized type name such as `I`, `L<t>` or `L<L<I>>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeTerm {
    pub name: Symbol,
    pub args: Vec<TypeTerm>,
}

impl TypeTerm {
    pub fn atom(name: impl Into<Symbol>) -> Self {
        TypeTerm {
            name: name.into(),
            args: Vec::new(),
        }
    }

    pub fn apply(name: impl Into<Symbol>, args: Vec<TypeTerm>) -> Self {
        TypeTerm { name: name.into(), args }
    }

    /// Parses the canonical text form produced by `Display`.
    pub fn parse(text: &str) -> Option<TypeTerm> {
        let (t, rest) = Self::parse_prefix(text.trim())?;
        rest.trim().is_empty().then_some(t)
    }

    fn parse_prefix(s: &str) -> Option<(TypeTerm, &str)> {
        let s = s.trim_start();
        let end = s
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(s.len());
        if end == 0 {
            return None;
        }
        let name = &s[..end];
        let mut rest = s[end..].trim_start();
        let mut args = Vec::new();
        if let Some(r) = rest.strip_prefix('<') {
            rest = r;
            loop {
                let (a, r) = Self::parse_prefix(rest)?;
                args.push(a);
                let r = r.trim_start();
                if let Some(r) = r.strip_prefix(',') {
                    rest = r;
                } else {
                    rest = r.strip_prefix('>')?;
                    break;
                }
            }
        }
        Some((TypeTerm::apply(name, args), rest))
    }

    pub fn substitute(&self, env: &BTreeMap<Symbol, TypeTerm>) -> TypeTerm {
        if self.args.is_empty() {
            if let Some(t) = env.get(&self.name) {
                return t.clone();
            }
        }
        TypeTerm::apply(
            self.name.clone(),
            self.args.iter().map(|a| a.substitute(env)).collect(),
        )
    }

    pub fn label(&self) -> Symbol {
        Symbol::from(self.to_string())
    }
}

impl fmt::Display for TypeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            write!(f, "<")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ">")?;
        }
        Ok(())
    }
}

/// A declared shape type. `arity` is `None` for variadic types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeType {
    pub name: Symbol,
    pub arity: Option<usize>,
    pub type_params: Vec<Symbol>,
}

/// Productions `T ::= G1 | … | Gn`. Nonterminal edges carry the text of a type term as label;
/// inside productions a `Call`/`Disguised` edge labeled with a type name stands for a call graph
/// of that type whose principal edge has the given kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShapeGrammar {
    pub types: BTreeMap<Symbol, ShapeType>,
    pub productions: BTreeMap<Symbol, Vec<Graph>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("unknown type {0}")]
    UnknownType(Symbol),
    #[error("type parameter {0} has no argument")]
    UnknownParameter(Symbol),
    #[error("type {name} expects {expected} arguments, got {got}")]
    ArgumentCount { name: Symbol, expected: usize, got: usize },
    #[error("malformed type term {0}")]
    BadTerm(String),
}

impl ShapeGrammar {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, t: ShapeType) {
        self.productions.entry(t.name.clone()).or_default();
        self.types.insert(t.name.clone(), t);
    }

    pub fn add_alternative(&mut self, name: impl Into<Symbol>, g: Graph) {
        self.productions.entry(name.into()).or_default().push(g);
    }

    pub fn alternatives(&self, name: &str) -> &[Graph] {
        self.productions.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn arity(&self, name: &str) -> Option<Option<usize>> {
        self.types.get(name).map(|t| t.arity)
    }

    pub fn is_type(&self, label: &str) -> bool {
        self.types.contains_key(label)
    }

    /// Instantiates `t` and every type its productions reach, adding types named by their full
    /// term (`L<I>`). Declarations without parameters are kept as they are.
    pub fn monomorphize(&self, t: &TypeTerm) -> Result<ShapeGrammar, ShapeError> {
        let mut out = self.clone();
        let mut done = BTreeSet::new();
        let mut todo = vec![t.clone()];
        while let Some(term) = todo.pop() {
            let label = term.label();
            if !done.insert(label.clone()) {
                continue;
            }
            let decl = self
                .types
                .get(&term.name)
                .ok_or_else(|| ShapeError::UnknownType(term.name.clone()))?;
            if decl.type_params.len() != term.args.len() {
                return Err(ShapeError::ArgumentCount {
                    name: term.name.clone(),
                    expected: decl.type_params.len(),
                    got: term.args.len(),
                });
            }
            let env: BTreeMap<Symbol, TypeTerm> = decl
                .type_params
                .iter()
                .cloned()
                .zip(term.args.iter().cloned())
                .collect();
            let mut alts = Vec::new();
            for g in self.alternatives(term.name.as_str()) {
                let mut g = g.clone();
                rename_types(&mut g, &env, &mut todo)?;
                alts.push(g);
            }
            out.types.insert(
                label.clone(),
                ShapeType {
                    name: label.clone(),
                    arity: decl.arity,
                    type_params: Vec::new(),
                },
            );
            out.productions.insert(label, alts);
        }
        Ok(out)
    }
}

fn rename_types(g: &mut Graph, env: &BTreeMap<Symbol, TypeTerm>, todo: &mut Vec<TypeTerm>) -> Result<(), ShapeError> {
    let ids: Vec<_> = g.edge_ids().collect();
    for id in ids {
        let e = g.edge_mut(id).expect("edge");
        if e.kind == EdgeKind::Nonterminal {
            let term = TypeTerm::parse(e.label.as_str()).ok_or_else(|| ShapeError::BadTerm(e.label.to_string()))?;
            let term = term.substitute(env);
            e.label = term.label();
            todo.push(term);
        }
        if let Some(c) = e.contents.as_deref_mut() {
            rename_types(c, env, todo)?;
        }
    }
    Ok(())
}
