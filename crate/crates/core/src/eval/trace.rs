use std::fmt;

use crate::symbol::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Apply,
    Backtrack,
    OtherwiseFail,
    OtherwiseSucceed,
    Exception,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Apply => "apply",
            Action::Backtrack => "backtrack",
            Action::OtherwiseFail => "otherwise-fail",
            Action::OtherwiseSucceed => "otherwise-succeed",
            Action::Exception => "exception",
        })
    }
}

/// One engine event. Printed as tab-separated `step predicate rule match action`, with `-` for
/// a missing rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: usize,
    pub predicate: Symbol,
    pub rule: Option<Symbol>,
    /// The match for `apply`, the goal edge otherwise.
    pub summary: String,
    pub action: Action,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = self.rule.as_ref().map_or("-", |r| r.as_str());
        write!(f, "{}\t{}\t{}\t{}\t{}", self.step, self.predicate, rule, self.summary, self.action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let r = TraceRecord {
            step: 3,
            predicate: Symbol::new("normalize"),
            rule: None,
            summary: "e4".into(),
            action: Action::OtherwiseSucceed,
        };
        assert_eq!(r.to_string(), "3\tnormalize\t-\te4\totherwise-succeed");
    }
}
