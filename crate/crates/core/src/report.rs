//! Named pass/fail results with a stable text rendering.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, outcome: Outcome) {
        self.checks.push(Check { name: name.into(), outcome });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, Outcome::Pass);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Outcome::Fail(detail.into()));
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.push(name, Outcome::Skipped(reason.into()));
    }

    /// Records a pass if `ok`, else a failure with the lazily built detail.
    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, detail());
        }
    }

    pub fn extend(&mut self, other: Report) {
        for c in other.checks {
            self.checks.push(Check { name: format!("{}: {}", other.title, c.name), outcome: c.outcome });
        }
    }

    /// No failures (skips do not count against the report).
    pub fn all_passed(&self) -> bool {
        !self.checks.iter().any(|c| matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn outcome_of(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.title)?;
        for c in &self.checks {
            match &c.outcome {
                Outcome::Pass => writeln!(f, "PASS  {}", c.name)?,
                Outcome::Fail(d) if d.is_empty() => writeln!(f, "FAIL  {}", c.name)?,
                Outcome::Fail(d) => writeln!(f, "FAIL  {}  ({d})", c.name)?,
                Outcome::Skipped(r) => writeln!(f, "SKIP  {}  ({r})", c.name)?,
            }
        }
        let passed = self.checks.iter().filter(|c| c.outcome == Outcome::Pass).count();
        write!(f, "{passed}/{} passed", self.checks.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_and_status() {
        let mut r = Report::new("demo");
        r.pass("a");
        r.check("b", false, || "x != y".into());
        r.skip("c", "not applicable");
        assert!(!r.all_passed());
        assert_eq!(r.to_string(), "== demo ==\nPASS  a\nFAIL  b  (x != y)\nSKIP  c  (not applicable)\n1/3 passed");
    }
}
