//! Text front end: program files, graph printing and DOT export.

mod dot;
mod lexer;
mod parser;
mod print;

use thiserror::Error;

pub use dot::export_dot;
pub use parser::{parse_graph, parse_program};
pub use print::print_graph;

/// Source of the combinator library pulled in by `import stdlib;`.
pub const STDLIB: &str = include_str!("../../programs/stdlib.dp");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: duplicate declaration of {name}")]
    DuplicateDeclaration { name: String, line: usize, col: usize },
    #[error("{line}:{col}: unresolved name {name}")]
    UnresolvedName { name: String, line: usize, col: usize },
}

impl DslError {
    pub fn syntax(line: usize, col: usize, message: impl Into<String>) -> Self {
        DslError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }
}
