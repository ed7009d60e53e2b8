//! Certificates emitted by the verification stages.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohomology::S2Class;
use crate::poly::Polynomial;

/// At most this many offending monomials are listed in a diff.
pub const MAX_DIFF_TERMS: usize = 20;

/// One monomial whose claimed and computed coefficients differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDiff {
    pub monomial: String,
    pub claimed: String,
    pub computed: String,
}

/// A named sub-check inside a stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Reduction steps spent on the normal forms being compared.
    pub nf_steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub stage: String,
    pub claimed: String,
    pub computed: String,
    pub matched: bool,
    pub stats: Stats,
    pub runtime_ms: u64,
    #[serde(default)]
    pub sign: Option<i32>,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub diff: Vec<TermDiff>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(stage: &str) -> Self {
        Certificate {
            stage: stage.to_string(),
            claimed: String::new(),
            computed: String::new(),
            matched: false,
            stats: Stats::default(),
            runtime_ms: 0,
            sign: None,
            checks: Vec::new(),
            diff: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// A failed certificate carrying only an explanation.
    pub fn failure(stage: &str, note: impl Into<String>) -> Self {
        let mut c = Certificate::new(stage);
        c.notes.push(note.into());
        c
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check::new(name, passed, detail));
        passed
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Text rendering with the timing left out, so that two runs agree byte
    /// for byte.
    pub fn canonical_text(&self) -> String {
        let mut c = self.clone();
        c.runtime_ms = 0;
        c.to_string()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.matched { "MATCH" } else { "MISMATCH" };
        writeln!(
            f,
            "stage {}: {verdict} ({} ms)",
            self.stage, self.runtime_ms
        )?;
        writeln!(f, "  claimed:  {}", self.claimed)?;
        writeln!(f, "  computed: {}", self.computed)?;
        if let Some(s) = self.sign {
            writeln!(f, "  sign: {s:+}")?;
        }
        writeln!(f, "  nf steps: {}", self.stats.nf_steps)?;
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            writeln!(f, "  check {} [{mark}] {}", c.name, c.detail)?;
        }
        for d in &self.diff {
            writeln!(
                f,
                "  diff {}: claimed {} computed {}",
                d.monomial, d.claimed, d.computed
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Monomials on which `claimed` and `computed` disagree, each tagged with
/// `prefix`, in storage order.
pub fn term_diff(prefix: &str, claimed: &Polynomial, computed: &Polynomial) -> Vec<TermDiff> {
    let amb = claimed.ambient();
    let delta = claimed - computed;
    delta
        .terms()
        .iter()
        .take(MAX_DIFF_TERMS)
        .map(|(m, _)| TermDiff {
            monomial: format!(
                "{prefix}{}",
                Polynomial::term(amb, m.clone(), crate::poly::rat(1))
            ),
            claimed: claimed.coefficient(m).to_string(),
            computed: computed.coefficient(m).to_string(),
        })
        .collect()
}

/// Diff of two pair-model classes, `p:` terms first.
pub fn class_diff(claimed: &S2Class, computed: &S2Class) -> Vec<TermDiff> {
    let mut d = term_diff("p:", &claimed.p, &computed.p);
    d.extend(term_diff("q:", &claimed.q, &computed.q));
    d.truncate(MAX_DIFF_TERMS);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ambient;

    #[test]
    fn diff_lists_offending_monomials() {
        let amb = Ambient::from_pairs(&[("x", 2), ("y", 2)]).unwrap();
        let a = Polynomial::parse("3*x^2 + x*y - y", &amb).unwrap();
        let b = Polynomial::parse("3*x^2 + 2*x*y - y", &amb).unwrap();
        let d = term_diff("q:", &a, &b);
        assert_eq!(
            d,
            vec![TermDiff {
                monomial: "q:x*y".into(),
                claimed: "1".into(),
                computed: "2".into()
            }]
        );
        assert!(term_diff("", &a, &a).is_empty());
    }

    #[test]
    fn diff_is_capped() {
        let amb = Ambient::from_pairs(&[("x", 2)]).unwrap();
        let a = Polynomial::parse("(1+x)^40", &amb).unwrap();
        let b = Polynomial::zero(&amb);
        assert_eq!(term_diff("", &a, &b).len(), MAX_DIFF_TERMS);
    }

    #[test]
    fn canonical_text_ignores_timing() {
        let mut a = Certificate::new("cf");
        a.runtime_ms = 5;
        let mut b = a.clone();
        b.runtime_ms = 900;
        assert_eq!(a.canonical_text(), b.canonical_text());
        assert_ne!(a.to_string(), b.to_string());
    }
}
