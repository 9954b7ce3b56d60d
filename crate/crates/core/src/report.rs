//! Clause-by-clause results of sampled property checks.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseReport {
    pub clause: String,
    pub samples: usize,
    pub failures: usize,
    pub max_defect: f64,
    pub witness: Option<String>,
}

impl ClauseReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub clauses: Vec<ClauseReport>,
    /// Analytic hypotheses that cannot be tested pointwise.
    pub untested: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            clauses: Vec::new(),
            untested: Vec::new(),
        }
    }

    fn entry(&mut self, clause: &str) -> &mut ClauseReport {
        if let Some(i) = self.clauses.iter().position(|c| c.clause == clause) {
            return &mut self.clauses[i];
        }
        self.clauses.push(ClauseReport {
            clause: clause.to_string(),
            samples: 0,
            failures: 0,
            max_defect: 0.0,
            witness: None,
        });
        self.clauses.last_mut().unwrap()
    }

    /// Records a numeric defect; the sample fails when `defect > tol` or is not finite.
    pub fn defect(&mut self, clause: &str, defect: f64, tol: f64, witness: impl FnOnce() -> String) {
        let e = self.entry(clause);
        e.samples += 1;
        let ok = defect.is_finite() && defect <= tol;
        if defect.is_finite() && defect > e.max_defect {
            e.max_defect = defect;
        }
        if !ok {
            e.failures += 1;
            if e.witness.is_none() {
                e.witness = Some(format!("{} (defect {:e})", witness(), defect));
            }
        }
    }

    /// Records a boolean outcome.
    pub fn check(&mut self, clause: &str, ok: bool, witness: impl FnOnce() -> String) {
        let e = self.entry(clause);
        e.samples += 1;
        if !ok {
            e.failures += 1;
            if e.witness.is_none() {
                e.witness = Some(witness());
            }
        }
    }

    /// Records a structural error raised while evaluating a sample.
    pub fn error(&mut self, clause: &str, err: impl fmt::Display) {
        self.check(clause, false, || err.to_string());
    }

    /// Ensures a clause is listed even when no sample reached it.
    pub fn touch(&mut self, clause: &str) {
        self.entry(clause);
    }

    pub fn untested(&mut self, hypothesis: impl Into<String>) {
        let h = hypothesis.into();
        if !self.untested.contains(&h) {
            self.untested.push(h);
        }
    }

    /// Appends the clauses of `other`, prefixed by its name.
    pub fn merge(&mut self, other: CheckReport) {
        for c in other.clauses {
            let mut c = c;
            c.clause = format!("{}: {}", other.name, c.clause);
            self.clauses.push(c);
        }
        for h in other.untested {
            self.untested(h);
        }
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(ClauseReport::passed)
    }

    pub fn clause(&self, name: &str) -> Option<&ClauseReport> {
        self.clauses.iter().find(|c| c.clause == name)
    }

    pub fn failed_clauses(&self) -> Vec<&ClauseReport> {
        self.clauses.iter().filter(|c| !c.passed()).collect()
    }

    pub fn max_defect(&self) -> f64 {
        self.clauses.iter().map(|c| c.max_defect).fold(0.0, f64::max)
    }

    pub fn total_samples(&self) -> usize {
        self.clauses.iter().map(|c| c.samples).sum()
    }

    /// First witness among failed clauses.
    pub fn witness(&self) -> Option<String> {
        self.clauses
            .iter()
            .filter(|c| !c.passed())
            .find_map(|c| c.witness.as_ref().map(|w| format!("{}: {}", c.clause, w)))
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.name, if self.passed() { "pass" } else { "FAIL" })?;
        for c in &self.clauses {
            write!(
                f,
                "  {:<50} {:>6} samples  {:>4} failures  max {:.3e}",
                c.clause, c.samples, c.failures, c.max_defect
            )?;
            if let (false, Some(w)) = (c.passed(), &c.witness) {
                write!(f, "  witness: {w}")?;
            }
            writeln!(f)?;
        }
        for h in &self.untested {
            writeln!(f, "  untested: {h}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_keep_first_witness() {
        let mut r = CheckReport::new("t");
        r.defect("a", 0.5, 1.0, || "x".into());
        r.defect("a", 2.0, 1.0, || "first".into());
        r.defect("a", 3.0, 1.0, || "second".into());
        let c = r.clause("a").unwrap();
        assert_eq!(c.samples, 3);
        assert_eq!(c.failures, 2);
        assert_eq!(c.max_defect, 3.0);
        assert!(c.witness.as_ref().unwrap().starts_with("first"));
        assert!(!r.passed());
    }

    #[test]
    fn nan_defect_is_a_failure() {
        let mut r = CheckReport::new("t");
        r.defect("a", f64::NAN, 1.0, || "nan".into());
        assert!(!r.passed());
        assert_eq!(r.max_defect(), 0.0);
    }

    #[test]
    fn merge_prefixes_clauses() {
        let mut a = CheckReport::new("a");
        let mut b = CheckReport::new("b");
        b.check("c", true, String::new);
        b.untested("open");
        a.merge(b);
        assert!(a.clause("b: c").is_some());
        assert_eq!(a.untested, vec!["open".to_string()]);
    }
}
