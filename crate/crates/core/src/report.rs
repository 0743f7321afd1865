//! Structured diagnostics shared by the validators and checkers.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Info,
}

/// What kind of rule a violation breaks. Tests match on this rather than on message text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    UnknownNode,
    UnknownEdge,
    CrossFrameAttachment,
    FrameContents,
    BadParameter,
    UnboundReplacementVariable,
    UnboundPremiseVariable,
    NonLinearPattern,
    InterfaceMismatch,
    GraphVariableAtTopLevel,
    AmbiguousFrameContents,
    DuplicatedReplacementVariable,
    InconsistentVariable,
    PredicateEdgeCount,
    FrameAccessOutsideClass,
    PrivateMethodCall,
    UndeclaredFrameType,
    FrameContentsShape,
    ReplacementShape,
    PatternShape,
    PremiseShape,
    UntypedVariable,
    Signature,
    Grammar,
}

impl ViolationKind {
    pub fn describe(self) -> &'static str {
        use ViolationKind::*;
        match self {
            UnknownNode => "unknown node",
            UnknownEdge => "unknown edge",
            CrossFrameAttachment => "cross-frame attachment",
            FrameContents => "frame contents mismatch",
            BadParameter => "bad predicate parameter",
            UnboundReplacementVariable => "unbound variable in replacement",
            UnboundPremiseVariable => "unbound variable in premise",
            NonLinearPattern => "non-linear pattern",
            InterfaceMismatch => "interface mismatch",
            GraphVariableAtTopLevel => "graph variable at pattern top level",
            AmbiguousFrameContents => "ambiguous frame contents",
            DuplicatedReplacementVariable => "duplicated variable in replacement",
            InconsistentVariable => "inconsistent variable use",
            PredicateEdgeCount => "pattern must contain exactly one predicate edge",
            FrameAccessOutsideClass => "frame contents access outside class",
            PrivateMethodCall => "private method call",
            UndeclaredFrameType => "undeclared frame type",
            FrameContentsShape => "frame contents not of declared shape",
            ReplacementShape => "replacement not of declared shape",
            PatternShape => "pattern not of declared shape",
            PremiseShape => "premise not of declared shape",
            UntypedVariable => "untyped variable",
            Signature => "signature violation",
            Grammar => "malformed shape grammar",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub severity: Severity,
    /// Where the problem is, e.g. `pred remove/rule 0/replacement/e3`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Info => "note",
        };
        write!(f, "{sev}: {}: {}", self.kind.describe(), self.path)?;
        if !self.message.is_empty() {
            write!(f, ": {}", self.message)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn error(&mut self, kind: ViolationKind, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn info(&mut self, kind: ViolationKind, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            severity: Severity::Info,
            path: path.into(),
            message: message.into(),
        });
    }

    /// True iff there are no error-severity violations. Informational notes do not count.
    pub fn is_empty(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Error)
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.errors().filter(|v| v.kind == kind).count()
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}
